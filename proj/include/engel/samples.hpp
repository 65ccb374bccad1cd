#pragma once

#include <cstdint>

#include "engel/curves.hpp"
#include "engel/geiges.hpp"

namespace engel::samples {

/// Jet-space horizontal curve s -> (s, y(s), y'(s), y''(s)) in the Darboux
/// model from polynomial coefficients of y (ascending powers).
SampledCurve jet_curve(const std::vector<double>& poly, double a, double b, std::size_t n);

/// Straight segment along a coordinate axis (axis in {0,1,2,3}).
SampledCurve axis_segment(int axis, double a, double b, std::size_t n);

/// Kernel-orbit segment through base over the given t-range (Darboux,
/// Lorentzian and mapping-torus kernels have closed-form orbits).
SampledCurve w_orbit(const EngelModel& m, const Point4& base, double u0, double u1, std::size_t n);

/// Open horizontal Darboux curve that moves only along the kernel for
/// s in [0.4, 0.6] and transversally elsewhere.
SampledCurve plateau_curve(std::size_t n);

/// Closed horizontal Darboux loop with rotation number `rot`, discretely
/// exact closure and front area (solved on the curve's own grid). The
/// (x, t)-trace is a seeded trigonometric profile of size `scale`.
SampledCurve standard_loop(int rot, std::size_t samples, std::uint64_t seed, double scale = 0.05,
                           double y0 = 0.0, std::uint64_t variant = 0);

/// Pair of equal-rotation loops sharing the seed's phase structure (so their
/// interpolants stay well conditioned) but differing in shape and position.
std::pair<SampledCurve, SampledCurve> loop_pair(int rot, std::size_t samples, std::uint64_t seed);

/// Rigid contact translation of a horizontal loop: x += dx, z += dz + shear*x,
/// t += shear, then re-lifted from y0. Discrete front area is preserved.
SampledCurve translate_loop(const SampledCurve& c, double dx, double dz, double shear, double y0);

/// Resamples the curve along a seeded orientation-preserving reparametrization
/// (linear interpolation of positions onto the original grid).
SampledCurve reparametrize(const SampledCurve& c, std::uint64_t seed);

SampledCurve reverse_orientation(const SampledCurve& c);

/// 1-parameter family whose tangency indicator grazes the threshold
/// non-transversally (input for the genericity perturbation).
FamilyOfCurves grazing_family(std::size_t members, std::size_t samples, std::uint64_t seed);

/// Family containing a full kernel orbit (violates the n.e.t. hypothesis).
FamilyOfCurves family_with_orbit_member(std::size_t members, std::size_t samples);

/// (u,v) -> (0,u,v,0): transverse to the Darboux distribution.
GridMap yz_plane_grid(std::size_t n);

/// (u,v) -> (u,0,0,v) with v in [-1/2, 1/2]: tangent plane inside D on the
/// middle slice.
GridMap xt_plane_grid(std::size_t n);

}  // namespace engel::samples
