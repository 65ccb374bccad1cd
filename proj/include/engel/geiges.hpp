#pragma once

#include <vector>

#include "engel/curves.hpp"

namespace engel {

/// Legendrian curve for ker(dz - t dx), stored structure-of-arrays.
struct LegendrianCurve {
    std::vector<double> params;
    std::vector<double> x, z, t;
    bool closed = false;

    std::size_t size() const { return params.size(); }
};

/// max |z' - t x'| / (|x'| + |z'| + |t'|) over the grid.
double legendrian_residual(const LegendrianCurve& l);

void validate_legendrian(const LegendrianCurve& l, double tol = 1e-6);

/// Coordinatewise drop of y. Requires the curve horizontal in the Darboux
/// model (residual < tol, default 1e-6).
LegendrianCurve geiges_project(const SampledCurve& c, double tol = 1e-6);

/// Integral lift y(s) = y0 + int z dx (composite trapezoid on the curve's own
/// grid). The output is closed iff the input is closed and the front signed
/// area vanishes within 1e-10.
SampledCurve geiges_lift(const LegendrianCurve& l, double y0);

/// The area constraint: closed-curve integral of z dx over the front.
/// Equals the y-displacement of any lift. Counterclockwise embedded fronts
/// give the negative of the enclosed geometric area.
double front_signed_area(const LegendrianCurve& l);

}  // namespace engel
