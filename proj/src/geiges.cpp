#include "engel/geiges.hpp"

#include <cmath>

#include "engel/numerics.hpp"

namespace engel {

double legendrian_residual(const LegendrianCurve& l) {
    if (l.size() < 3) fail("IoFailure", "need at least 3 samples");
    const auto dx = fd_derivative(l.params, l.x, l.closed);
    const auto dz = fd_derivative(l.params, l.z, l.closed);
    const auto dt = fd_derivative(l.params, l.t, l.closed);
    double worst = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        const double denom = std::abs(dx[i]) + std::abs(dz[i]) + std::abs(dt[i]);
        if (denom < 1e-14) fail("DegenerateSpeed", "stationary Legendrian sample");
        worst = std::max(worst, std::abs(dz[i] - l.t[i] * dx[i]) / denom);
    }
    return worst;
}

void validate_legendrian(const LegendrianCurve& l, double tol) {
    if (l.params.size() != l.x.size() || l.x.size() != l.z.size() || l.z.size() != l.t.size())
        fail("IoFailure", "legendrian arrays have mismatched lengths");
    for (std::size_t i = 0; i + 1 < l.params.size(); ++i)
        if (!(l.params[i] < l.params[i + 1]))
            fail("IoFailure", "parameter grid must be strictly increasing");
    if (l.closed) {
        const double gap = std::hypot(l.x.back() - l.x.front(), l.z.back() - l.z.front()) +
                           std::abs(l.t.back() - l.t.front());
        if (gap > 1e-10) fail("NotClosed", "closed flag set but endpoints differ");
    }
    const double r = legendrian_residual(l);
    if (r > tol)
        fail("NotLegendrian", "Legendrian residual " + std::to_string(r) + " exceeds tolerance");
}

LegendrianCurve geiges_project(const SampledCurve& c, double tol) {
    const double r = horizontality_residual(c, EngelModel::darboux());
    if (r > tol)
        fail("NotHorizontal",
             "horizontality residual " + std::to_string(r) + " exceeds tolerance " + std::to_string(tol));
    LegendrianCurve l;
    l.params = c.params;
    l.closed = c.closed;
    l.x.reserve(c.size());
    l.z.reserve(c.size());
    l.t.reserve(c.size());
    for (const Point4& p : c.points) {
        l.x.push_back(p.x);
        l.z.push_back(p.z);
        l.t.push_back(p.t);
    }
    return l;
}

SampledCurve geiges_lift(const LegendrianCurve& l, double y0) {
    validate_legendrian(l);
    const auto y = cumtrapz_du(l.z, l.x, y0);
    SampledCurve c;
    c.params = l.params;
    c.points.resize(l.size());
    for (std::size_t i = 0; i < l.size(); ++i)
        c.points[i] = {l.x[i], y[i], l.z[i], l.t[i]};
    c.closed = l.closed && std::abs(y.back() - y.front()) < 1e-10;
    return c;
}

double front_signed_area(const LegendrianCurve& l) {
    if (!l.closed) fail("NotClosed", "signed area needs a closed curve");
    return trapz_du(l.z, l.x);
}

}  // namespace engel
