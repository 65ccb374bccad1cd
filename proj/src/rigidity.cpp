#include "engel/rigidity.hpp"

#include <cmath>

#include "engel/numerics.hpp"

namespace engel::rigidity {

namespace {

/// Builds a front whose tangent line angle follows nu * theta, running from
/// p0 to p1 with a prescribed discrete integral of z dx. The speed profile
/// 1 + b cos(pi theta) + q cos(2 pi theta) carries three parameters solved
/// against the grid functionals, so the endpoint and area conditions hold to
/// machine precision at quadrature resolution.
struct ProfileFront {
    fronts::Front front;
    std::vector<double> speed;
};

ProfileFront front_with_angle_profile(double nu, const Vec2& p0, const Vec2& p1,
                                      double target_integral, std::size_t samples) {
    const auto s = linspace(0.0, 1.0, samples + 1);
    auto build = [&](const std::vector<double>& p) {
        std::vector<double> vx(s.size()), vz(s.size()), speed(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double c = p[0] + p[1] * std::cos(kPi * s[i]) + p[2] * std::cos(2.0 * kPi * s[i]);
            speed[i] = c;
            vx[i] = c * std::cos(nu * s[i]);
            vz[i] = c * std::sin(nu * s[i]);
        }
        ProfileFront pf;
        pf.front.params = s;
        pf.front.x = cumtrapz(s, vx, p0.x);
        pf.front.z = cumtrapz(s, vz, p0.z);
        pf.speed = std::move(speed);
        return pf;
    };
    const double scale = std::max({1.0, std::abs(target_integral), (p1 - p0).norm()});
    auto residual = [&](const std::vector<double>& p) {
        const ProfileFront pf = build(p);
        return std::vector<double>{(pf.front.x.back() - p1.x) / scale,
                                   (pf.front.z.back() - p1.z) / scale,
                                   (trapz_du(pf.front.z, pf.front.x) - target_integral) / scale};
    };
    const auto p = newton_solve(residual, {1.0, 0.0, 0.0}, 120, 1e-13);
    ProfileFront pf = build(p);
    // pin the endpoint bit-exactly; the solve residue is below 1e-13 * scale
    pf.front.x.back() = p1.x;
    pf.front.z.back() = p1.z;
    for (std::size_t i = 0; i + 1 < pf.speed.size(); ++i)
        if (pf.speed[i] == 0.0 || pf.speed[i] * pf.speed[i + 1] < 0.0)
            pf.front.cusp_marks.push_back(s[i]);
    return pf;
}

double wrap_pi(double a) { return std::remainder(a, kPi); }

}  // namespace

TorusDeformation torus_reconstruct(const fronts::Front& front, const EngelModel& torus, double y0,
                                   double angle_tol) {
    if (torus.kind() != ModelKind::MappingTorus)
        fail("IoFailure", "reconstruction needs a mapping-torus model");
    TorusDeformation d;
    d.front = front;

    const auto& s = front.params;
    const bool degenerate = [&] {
        for (std::size_t i = 0; i < front.size(); ++i)
            if (std::abs(front.x[i] - front.x.front()) + std::abs(front.z[i] - front.z.front()) >
                1e-15)
                return false;
        return true;
    }();

    std::vector<double> y(front.size(), y0);
    if (!degenerate) y = cumtrapz_du(front.z, front.x, y0);
    d.curve.params = s;
    d.curve.points.resize(front.size());
    for (std::size_t i = 0; i < front.size(); ++i)
        d.curve.points[i] = {front.x[i], y[i], front.z[i], s[i]};

    if (!degenerate) {
        const auto dx = fd_derivative(s, front.x, false);
        const auto dz = fd_derivative(s, front.z, false);
        double vmax = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) vmax = std::max(vmax, std::hypot(dx[i], dz[i]));
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (std::hypot(dx[i], dz[i]) < 0.25 * vmax) continue;  // near a cusp
            const double front_angle = std::atan2(dz[i], dx[i]);
            const double f = torus.turning()(d.curve.points[i]);
            d.angle_residual = std::max(d.angle_residual, std::abs(wrap_pi(front_angle - f)));
        }
        const auto dy = fd_derivative(s, y, false);
        const auto dxv = dx;
        for (std::size_t i = 0; i < s.size(); ++i)
            d.y_residual = std::max(d.y_residual, std::abs(dy[i] - front.z[i] * dxv[i]));
    }
    if (d.angle_residual > angle_tol)
        fail("AngleMismatch", "front tangent angle deviates from the turning function by " +
                                  std::to_string(d.angle_residual));

    const Point4 end = d.curve.points.back();
    const Vec3 mapped = torus.return_map()(Vec3{end.x, end.y, end.z});
    const Point4 start = d.curve.points.front();
    d.closure_defect = std::sqrt((mapped.x - start.x) * (mapped.x - start.x) +
                                 (mapped.y - start.y) * (mapped.y - start.y) +
                                 (mapped.z - start.z) * (mapped.z - start.z));
    return d;
}

Lemma2Report lemma2_search(double z0, double z1, double a, double b, int n_starts,
                           std::uint64_t seed, std::size_t grid, int iter_cap) {
    if (!(a < b)) fail("IoFailure", "interval must satisfy a < b");
    if (n_starts < 1) fail("IoFailure", "need at least one start");
    const double dz = z1 - z0;
    if (dz < 0.0)
        fail("Infeasible", "z1 < z0: the integral of t^2 is nonnegative, no profile exists");

    Lemma2Report rep;
    rep.x_grid = linspace(a, b, grid);
    Rng rng(seed);

    for (int st = 0; st < n_starts; ++st) {
        Lemma2Start out;
        out.t.resize(grid);
        for (double& v : out.t) v = rng.uniform(-1.0, 1.0);

        auto integral = [&](const std::vector<double>& t) {
            std::vector<double> sq(grid);
            for (std::size_t i = 0; i < grid; ++i) sq[i] = t[i] * t[i];
            return trapz(rep.x_grid, sq);
        };

        double S = integral(out.t);
        const double tol = (dz == 0.0) ? 1e-22 : 1e-14 * std::max(1.0, dz);
        for (out.iterations = 0; out.iterations < iter_cap; ++out.iterations) {
            const double err = S - dz;
            if (std::abs(err) < tol) break;
            // scaled gradient step on |S - dz|, multiplicative in t so the
            // contraction/growth factor stays in a stable band
            const double denom = std::max({std::abs(err), S, 1e-300});
            const double factor = 1.0 - 0.5 * err / denom;
            for (double& v : out.t) v *= factor;
            S = integral(out.t);
        }
        out.defect = std::abs(S - dz);
        out.converged = out.defect < tol * 10.0;
        for (double v : out.t) out.max_abs_t = std::max(out.max_abs_t, std::abs(v));
        rep.starts.push_back(std::move(out));
    }
    for (std::size_t i = 0; i < rep.starts.size(); ++i)
        if (rep.best < 0 || rep.starts[i].defect < rep.starts[std::size_t(rep.best)].defect)
            rep.best = int(i);
    if (rep.best < 0 || !rep.starts[std::size_t(rep.best)].converged)
        fail("NoConvergence", "no start reached the feasibility tolerance within the cap");
    return rep;
}

TorusDeformation build_example4(double area, std::size_t samples) {
    const auto torus =
        EngelModel::mapping_torus(TurningFn::linear(kPi), Contactomorphism3::half_scaling());
    if (area < 0.0) fail("IoFailure", "area must be nonnegative");
    if (area == 0.0) {
        fronts::Front point;
        point.params = linspace(0.0, 1.0, 129);
        point.x.assign(129, 0.0);
        point.z.assign(129, 0.0);
        return torus_reconstruct(point, torus, 0.0);
    }
    ProfileFront pf = front_with_angle_profile(kPi, {0, 0}, {0, 0}, area, samples);
    // closure algebra: y(0) = area makes y(1) = 2 * area and phi close the curve
    return torus_reconstruct(pf.front, torus, area);
}

Example5Result build_example5(double alpha, double r, std::size_t samples) {
    if (!(alpha > 0.0 && alpha < kPi)) fail("BadAngle", "alpha must lie in (0, pi)");
    if (!(r > 0.0)) fail("IoFailure", "endpoint radius must be positive");

    Example5Result res;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    res.p1 = {r * std::sin(0.5 * alpha), r * std::cos(0.5 * alpha)};
    res.p0 = {ca * res.p1.x + sa * res.p1.z, ca * res.p1.z - sa * res.p1.x};

    res.closed_form = sa * sa * res.p1.z * res.p1.x -
                      0.5 * ca * sa * (res.p1.z * res.p1.z - res.p1.x * res.p1.x);
    // exact trapezoid of z dx over the two straight segments through the origin
    res.polyline_integral = (0.0 - res.p0.x) * (res.p0.z + 0.0) * 0.5 +
                            (res.p1.x - 0.0) * (0.0 + res.p1.z) * 0.5;

    const double nu = kPi - alpha;
    ProfileFront pf = front_with_angle_profile(nu, res.p0, res.p1, res.closed_form, samples);
    const auto torus =
        EngelModel::mapping_torus(TurningFn::linear(nu), Contactomorphism3::rotation_lift(alpha));
    res.deformation = torus_reconstruct(pf.front, torus, 0.0);
    return res;
}

TorusDeformation prop7_deform(const Contactomorphism3& phi, std::size_t samples) {
    const Vec3 origin{0, 0, 0};
    if (phi(origin).norm() > 1e-12) fail("IoFailure", "the contactomorphism must fix the origin");
    const double c = contact_conformal_factor(phi, origin);
    if (std::abs(c - 1.0) <= 1e-6)
        fail("StrictConformal",
             "conformal factor is 1 within tolerance; the construction degenerates");

    // smallest positive turning of the Legendrian line under the return map
    const auto J = phi.jacobian(origin);
    double nu = std::remainder(std::atan2(J[2 * 3 + 0], J[0 * 3 + 0]), kPi);
    if (nu <= 1e-9) nu += kPi;

    const double S = 0.1;  // positive enclosed area, sign chosen to match 1 - c
    ProfileFront pf = front_with_angle_profile(nu, {0, 0}, {0, 0}, S, samples);
    const double y1 = S / (1.0 - c);
    return torus_reconstruct(pf.front, EngelModel::mapping_torus(TurningFn::linear(nu), phi),
                             c * y1);
}

}  // namespace engel::rigidity
