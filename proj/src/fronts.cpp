#include "engel/fronts.hpp"

#include <algorithm>
#include <cmath>

#include "engel/numerics.hpp"

namespace engel::fronts {

bool front_is_closed(const Front& f, double tol) {
    if (f.size() < 2) return false;
    return std::hypot(f.x.back() - f.x.front(), f.z.back() - f.z.front()) <= tol;
}

double signed_area(const Front& f) {
    if (!front_is_closed(f)) fail("NotClosed", "signed area needs a closed front");
    return trapz_du(f.z, f.x);
}

// ---------------------------------------------------------------------------
// Cusp detection
// ---------------------------------------------------------------------------

Front detect_cusps(const std::vector<double>& params, const std::vector<double>& x,
                   const std::vector<double>& z, const CuspDetectOptions& opts) {
    if (params.size() < 32) fail("IoFailure", "cusp detection needs at least 32 samples");
    const std::size_t n = params.size();
    const bool closed = std::hypot(x.back() - x.front(), z.back() - z.front()) <= 1e-10;
    const auto dx = fd_derivative(params, x, closed);
    const auto dz = fd_derivative(params, z, closed);
    std::vector<double> speed(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        speed[i] = std::hypot(dx[i], dz[i]);
        mean += speed[i];
    }
    mean /= double(n);
    const double floor = opts.cusp_floor_rel * mean;

    // distinct samples for periodic indexing
    const std::size_t m = closed ? n - 1 : n;
    auto sp = [&](std::ptrdiff_t i) {
        if (closed) return speed[std::size_t((i % std::ptrdiff_t(m) + m) % std::ptrdiff_t(m))];
        return speed[std::size_t(std::clamp<std::ptrdiff_t>(i, 0, std::ptrdiff_t(n) - 1))];
    };
    auto dir = [&](std::ptrdiff_t i) {
        std::size_t j;
        if (closed)
            j = std::size_t((i % std::ptrdiff_t(m) + m) % std::ptrdiff_t(m));
        else
            j = std::size_t(std::clamp<std::ptrdiff_t>(i, 0, std::ptrdiff_t(n) - 1));
        return Vec2{dx[j], dz[j]};
    };

    std::vector<double> marks;
    for (std::size_t i = 0; i < m; ++i) {
        if (speed[i] >= floor) continue;
        if (!(sp(std::ptrdiff_t(i) - 1) >= speed[i] && sp(std::ptrdiff_t(i) + 1) >= speed[i]))
            continue;  // not a local minimum
        // direction reversal across the minimum
        const int k = 3;
        Vec2 a = dir(std::ptrdiff_t(i) - k), b = dir(std::ptrdiff_t(i) + k);
        const double an = a.norm(), bn = b.norm();
        if (an < 1e-14 || bn < 1e-14) fail("UnresolvedCusp", "tangent direction lost near a speed minimum");
        const double c = dot(a, b) / (an * bn);
        if (c > -0.2) continue;  // slow spot, not a reversal
        // the tangent line must stay regular: compare line angles mod pi
        double da = std::atan2(a.z, a.x) - std::atan2(b.z, b.x);
        da = std::remainder(da, kPi);
        if (std::abs(da) > 0.35)
            fail("UnresolvedCusp", "tangent line direction degenerates at parameter " +
                                       std::to_string(params[i]));
        marks.push_back(params[i]);
    }
    if (closed) {  // report the seam cusp at parameter 0
        const double h = params[1] - params[0];
        for (double& mk : marks)
            if (mk > params.back() - 1.5 * h) mk = params.front();
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    Front out;
    out.params = params;
    out.x = x;
    out.z = z;
    out.cusp_marks = marks;
    out.slope_bound = opts.slope_bound;

    if (opts.check_alternation) {
        if (marks.size() % 2 == 0 || marks.empty())
            fail("NotAdmissible", "cusp count " + std::to_string(marks.size()) + " is not odd");
        // departures must alternate in z
        auto z_at = [&](double s) {
            const auto it = std::lower_bound(params.begin(), params.end(), s);
            return z[std::size_t(it - params.begin())];
        };
        for (std::size_t j = 0; j + 1 < marks.size(); ++j) {
            const double mid0 = 0.5 * (marks[j] + marks[j + 1]);
            const double next = (j + 2 < marks.size()) ? marks[j + 2] : (closed ? 1.0 : params.back());
            const double mid1 = 0.5 * (marks[j + 1] + next);
            const double up0 = z_at(mid0) - z_at(marks[j]);
            const double up1 = z_at(mid1) - z_at(marks[j + 1]);
            if (up0 * up1 >= 0.0)
                fail("NotAdmissible", "cusps do not alternate up/down");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reidemeister-I loop insertion (Legendrian-level core)
// ---------------------------------------------------------------------------

namespace {

double loop_bump(double u) {  // C3-flat at |u| = 1
    if (std::abs(u) >= 1.0) return 0.0;
    const double c = std::cos(0.5 * kPi * u);
    return c * c * c * c;
}

// slope-bump profiles, both C3-flat at the window edges: an even crest and an
// odd wave whose lobes straddle the backtracked zone
double theta_even(double u) { return loop_bump(u); }
double theta_odd(double u) { return loop_bump(u) * std::sin(kPi * u); }

// The x-advance is modulated multiplicatively: Q(u) = 1 - bump(u)/bump(u*)
// dips negative between the fixed crossings u = +-u*, where the slope bumps
// are strong, so the cusp slopes stay controllable. Side lobes supported away
// from the crossings restore the x-endpoint exactly.
constexpr double kCrossing = 0.55;

double q_base(double u) { return 1.0 - loop_bump(u) / loop_bump(kCrossing); }

double q_side(double u) {
    const double a = (std::abs(u) - 0.775) / 0.155;  // support |u| in [0.62, 0.93]
    return loop_bump(a);
}

struct WindowIdx {
    std::size_t lo, hi;  // inclusive sample range covering [s0-w, s0+w]
};

WindowIdx window_indices(const std::vector<double>& params, double s0, double w) {
    const auto lo_it = std::lower_bound(params.begin(), params.end(), s0 - w);
    const auto hi_it = std::upper_bound(params.begin(), params.end(), s0 + w);
    if (lo_it == params.end() || hi_it == params.begin())
        fail("NoCuspFreeWindow", "window lies outside the parameter range");
    WindowIdx idx{std::size_t(lo_it - params.begin()), std::size_t(hi_it - params.begin() - 1)};
    if (idx.lo < 1 || idx.hi + 1 >= params.size())
        fail("NoCuspFreeWindow", "window must stay inside the open parameter interval");
    if (idx.hi < idx.lo + 48)
        fail("NoCuspFreeWindow", "window too narrow: only " +
                                     std::to_string(idx.hi - idx.lo + 1) + " samples");
    return idx;
}

struct LoopLocal {
    WindowIdx idx;
    std::vector<double> x_new;       // window samples jlo..jhi
    std::vector<double> t0;          // original slope samples in the window
    double zeta0 = 0.0;              // trapezoid seam value anchoring the chain
    // affine system M u = rhs for u = (beta, gamma, delta) against the
    // conditions (z chain-A end, z chain-B end, area change)
    double M[9];
    double r0[3];                    // condition values at u = 0
};

/// z inside the window follows the centered-difference Legendrian relation
/// z_{j+1} = z_{j-1} + t_j (x_{j+1} - x_{j-1}), which makes |z' - t x'|
/// vanish at interior samples by construction. The two parity chains start
/// from z_old(jlo) and the seam value zeta = z(jlo + 1); the third solve
/// unknown rides on a parity zigzag tapered across the window, so the
/// chain-offset adjustment never lands as a single-sample jump.
std::vector<double> chain_z(const std::vector<double>& x, const std::vector<double>& t,
                            double z_lo, double zeta, double delta) {
    const std::size_t n = x.size();
    std::vector<double> z(n);
    z[0] = z_lo;
    if (n > 1) z[1] = zeta;
    for (std::size_t j = 1; j + 1 < n; ++j) z[j + 1] = z[j - 1] + t[j] * (x[j + 1] - x[j - 1]);
    for (std::size_t j = 1; j < n; j += 2)
        z[j] += delta * smoothstep5(double(j) / double(n - 1));
    return z;
}

/// Precomputes the displaced x-profile and the affine response of the z-chain
/// endpoints and the area functional to (beta, gamma, delta).
LoopLocal analyze_loop(const std::vector<double>& params, const std::vector<double>& x,
                       const std::vector<double>& z, const std::vector<double>& t, double s0,
                       double w) {
    LoopLocal L;
    L.idx = window_indices(params, s0, w);
    const std::size_t jlo = L.idx.lo, jhi = L.idx.hi;
    const std::size_t n = jhi - jlo + 1;

    // per-interval modulation factors, side amplitude solved so the discrete
    // x-endpoint is preserved exactly
    double num = 0.0, den = 0.0;
    std::vector<double> qb(n), qs(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = (params[jlo + j] - s0) / w;
        qb[j] = q_base(u);
        qs[j] = q_side(u);
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double dx = x[jlo + j + 1] - x[jlo + j];
        num += dx * (0.5 * (qb[j] + qb[j + 1]) - 1.0);
        den += dx * 0.5 * (qs[j] + qs[j + 1]);
    }
    if (std::abs(den) < 1e-300)
        fail("NumericallyDegenerate", "base path has no x-advance in the window");
    const double kappa = -num / den;

    L.x_new.resize(n);
    L.t0.resize(n);
    L.x_new[0] = x[jlo];
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double dx = x[jlo + j + 1] - x[jlo + j];
        const double qm = 0.5 * (qb[j] + qb[j + 1]) + kappa * 0.5 * (qs[j] + qs[j + 1]);
        L.x_new[j + 1] = L.x_new[j] + dx * qm;
    }
    L.x_new[n - 1] = x[jhi];  // exact by the kappa solve; snap roundoff
    for (std::size_t j = 0; j < n; ++j) L.t0[j] = t[jlo + j];
    const double zeta0_ =
        z[jlo] + 0.5 * (t[jlo] + t[jlo + 1]) * (L.x_new[1] - L.x_new[0]);
    {   // the modulated advance must genuinely backtrack
        double lo_adv = 1e300;
        for (std::size_t j = 0; j + 1 < n; ++j)
            lo_adv = std::min(lo_adv, (L.x_new[j + 1] - L.x_new[j]) * (x[jhi] >= x[jlo] ? 1.0 : -1.0));
        if (!(lo_adv < 0.0))
            fail("NumericallyDegenerate", "base path has no x-advance in the window");
    }

    auto evaluate = [&](double beta, double gamma, double delta, double out[3]) {
        std::vector<double> tv(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double u = (params[jlo + j] - s0) / w;
            tv[j] = L.t0[j] + beta * theta_even(u) + gamma * theta_odd(u);
        }
        const auto zv = chain_z(L.x_new, tv, z[jlo], zeta0_, delta);
        out[0] = zv[n - 1];
        out[1] = zv[n - 2];
        double before = 0.0, after = 0.0;
        for (std::size_t j = jlo - 1; j <= jhi; ++j) {
            before += 0.5 * (z[j] + z[j + 1]) * (x[j + 1] - x[j]);
            const double zl = (j >= jlo && j <= jhi) ? zv[j - jlo] : z[j];
            const double zr = (j + 1 >= jlo && j + 1 <= jhi) ? zv[j + 1 - jlo] : z[j + 1];
            const double xl = (j >= jlo && j <= jhi) ? L.x_new[j - jlo] : x[j];
            const double xr = (j + 1 >= jlo && j + 1 <= jhi) ? L.x_new[j + 1 - jlo] : x[j + 1];
            after += 0.5 * (zl + zr) * (xr - xl);
        }
        out[2] = after - before;
    };

    double base[3], e1[3], e2[3], e3[3];
    evaluate(0, 0, 0.0, base);
    evaluate(1, 0, 0.0, e1);
    evaluate(0, 1, 0.0, e2);
    evaluate(0, 0, 1.0, e3);
    for (int r = 0; r < 3; ++r) {
        L.M[r * 3 + 0] = e1[r] - base[r];
        L.M[r * 3 + 1] = e2[r] - base[r];
        L.M[r * 3 + 2] = e3[r] - base[r];
        L.r0[r] = base[r];
    }
    L.zeta0 = zeta0_;
    return L;
}

struct LoopSolution {
    double beta, gamma, delta;
};

/// Solves the 3x3 affine system for the chain-end matches and the area target.
LoopSolution solve_loop_full(const LoopLocal& L, double z_endA, double z_endB, double dA) {
    std::vector<double> M(L.M, L.M + 9);
    std::vector<double> rhs{z_endA - L.r0[0], z_endB - L.r0[1], dA - L.r0[2]};
    const auto u = solve_dense(M, rhs);
    return {u[0], u[1], u[2]};
}

/// Feasible |dA| range under the slope bound, along the affine solution line.
double loop_capacity(const LoopLocal& L, const std::vector<double>& params, double s0, double w,
                     double slope_bound) {
    if (!std::isfinite(slope_bound)) slope_bound = 4.0;  // default working band
    double t_max = 0.0;
    for (std::size_t j = 0; j + 1 < L.t0.size(); ++j) t_max = std::max(t_max, std::abs(L.t0[j]));
    const double headroom = slope_bound - t_max;
    if (headroom <= 0.0) return 0.0;
    // the (beta, gamma) solution is affine in dA
    const LoopSolution a = solve_loop_full(L, L.r0[0], L.r0[1], L.r0[2]);       // dA = base
    const LoopSolution b = solve_loop_full(L, L.r0[0], L.r0[1], L.r0[2] + 1.0);  // base + 1
    const double db = b.beta - a.beta, dg = b.gamma - a.gamma;
    double lo = -1e300, hi = 1e300;  // feasible dA offsets from the base
    for (std::size_t j = L.idx.lo; j <= L.idx.hi; ++j) {
        const double u = (params[j] - s0) / w;
        const double q = theta_even(u) * db + theta_odd(u) * dg;
        const double r = theta_even(u) * a.beta + theta_odd(u) * a.gamma;
        if (std::abs(q) < 1e-14) continue;
        const double c1 = (-headroom - r) / q, c2 = (headroom - r) / q;
        lo = std::max(lo, std::min(c1, c2));
        hi = std::min(hi, std::max(c1, c2));
    }
    if (!(hi > lo)) return 0.0;
    const double dlo = L.r0[2] + lo, dhi = L.r0[2] + hi;
    if (!(dlo < 0.0 && dhi > 0.0)) return 0.0;
    return 0.95 * std::min(-dlo, dhi);
}

void check_disjoint(const std::vector<LoopSpec>& loops) {
    for (std::size_t i = 0; i < loops.size(); ++i)
        for (std::size_t j = i + 1; j < loops.size(); ++j) {
            const double gap = std::abs(loops[i].s0 - loops[j].s0);
            if (gap < loops[i].half_width + loops[j].half_width)
                fail("IoFailure", "loop windows overlap");
        }
}

}  // namespace

LegendrianCurve insert_r1_loops(const LegendrianCurve& l, const std::vector<LoopSpec>& loops,
                                double slope_bound, std::vector<double>* new_cusps) {
    check_disjoint(loops);
    LegendrianCurve out = l;
    for (const LoopSpec& spec : loops) {
        LoopLocal local =
            analyze_loop(out.params, out.x, out.z, out.t, spec.s0, spec.half_width);
        const std::size_t jlo = local.idx.lo, jhi = local.idx.hi;
        const LoopSolution sol =
            solve_loop_full(local, out.z[jhi], out.z[jhi - 1], spec.target_area);
        std::vector<double> tv(jhi - jlo + 1);
        for (std::size_t j = jlo; j <= jhi; ++j) {
            const double u = (out.params[j] - spec.s0) / spec.half_width;
            tv[j - jlo] = local.t0[j - jlo] + sol.beta * theta_even(u) + sol.gamma * theta_odd(u);
            if (std::isfinite(slope_bound) && std::abs(tv[j - jlo]) > slope_bound * (1.0 + 1e-12))
                fail("SlopeBudgetExceeded", "requested area needs slope " +
                                                std::to_string(tv[j - jlo]) +
                                                " beyond the bound " + std::to_string(slope_bound));
        }
        const auto zv = chain_z(local.x_new, tv, out.z[jlo], local.zeta0, sol.delta);
        for (std::size_t j = jlo; j <= jhi; ++j) {
            out.x[j] = local.x_new[j - jlo];
            out.z[j] = zv[j - jlo];
            out.t[j] = tv[j - jlo];
        }
        // cusp parameters: sign changes of the discrete x-advance
        int crossings = 0;
        for (std::size_t j = jlo; j + 2 <= jhi; ++j) {
            const double d0 = out.x[j + 1] - out.x[j];
            const double d1 = out.x[j + 2] - out.x[j + 1];
            if (d0 * d1 < 0.0) {
                ++crossings;
                if (new_cusps) new_cusps->push_back(out.params[j + 1]);
            }
        }
        if (crossings != 2)
            fail("NumericallyDegenerate", "loop produced " + std::to_string(crossings) +
                                              " backtrack points instead of 2");
    }
    if (new_cusps) std::sort(new_cusps->begin(), new_cusps->end());
    return out;
}

double r1_capacity(const LegendrianCurve& l, double s0, double half_width, double slope_bound) {
    LoopLocal local = analyze_loop(l.params, l.x, l.z, l.t, s0, half_width);
    return loop_capacity(local, l.params, s0, half_width, slope_bound);
}

// ---------------------------------------------------------------------------
// Front-level API
// ---------------------------------------------------------------------------

namespace {

/// Slope reconstruction for front-level insertion; valid away from cusps.
LegendrianCurve front_to_leg(const Front& f) {
    LegendrianCurve l;
    l.params = f.params;
    l.x = f.x;
    l.z = f.z;
    l.closed = front_is_closed(f);
    const auto dx = fd_derivative(f.params, f.x, l.closed);
    const auto dz = fd_derivative(f.params, f.z, l.closed);
    l.t.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        l.t[i] = (std::abs(dx[i]) > 1e-12) ? dz[i] / dx[i] : 0.0;
    return l;
}

Front leg_to_front(const LegendrianCurve& l, const Front& like, std::vector<double> marks) {
    Front out;
    out.params = l.params;
    out.x = l.x;
    out.z = l.z;
    out.slope_bound = like.slope_bound;
    out.cusp_marks = like.cusp_marks;
    out.cusp_marks.insert(out.cusp_marks.end(), marks.begin(), marks.end());
    std::sort(out.cusp_marks.begin(), out.cusp_marks.end());
    return out;
}

void require_cusp_free(const Front& f, double lo, double hi) {
    for (double c : f.cusp_marks)
        if (c > lo - 1e-12 && c < hi + 1e-12)
            fail("NoCuspFreeWindow", "window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                         "] contains the cusp at " + std::to_string(c));
}

double auto_half_width(const Front& f, double s0) {
    double w = 0.20;
    w = std::min({w, 0.45 * (s0 - f.params.front()), 0.45 * (f.params.back() - s0)});
    for (double c : f.cusp_marks) w = std::min(w, 0.45 * std::abs(c - s0));
    if (w <= 0.0) fail("NoCuspFreeWindow", "no cusp-free window around the requested parameter");
    return w;
}

}  // namespace

double r1_area_capacity(const Front& f, double s0, double half_width) {
    if (half_width <= 0.0) half_width = auto_half_width(f, s0);
    require_cusp_free(f, s0 - half_width, s0 + half_width);
    return r1_capacity(front_to_leg(f), s0, half_width, f.slope_bound);
}

Front insert_r1_loop(const Front& f, double s0, double dA, double half_width) {
    if (dA == 0.0) return f;
    if (half_width <= 0.0) half_width = auto_half_width(f, s0);
    require_cusp_free(f, s0 - half_width, s0 + half_width);
    const double cap = r1_area_capacity(f, s0, half_width);
    if (std::abs(dA) > cap)
        fail("SlopeBudgetExceeded", "requested area " + std::to_string(dA) +
                                        " exceeds the window capacity " + std::to_string(cap));
    std::vector<double> marks;
    LegendrianCurve out = insert_r1_loops(front_to_leg(f), {{s0, half_width, dA}}, f.slope_bound, &marks);
    return leg_to_front(out, f, std::move(marks));
}

Front adjust_area_to(const Front& f, double target, const std::vector<Window>& windows,
                     const AreaAdjustOptions& opts, AreaAdjustPlan* plan_out) {
    if (windows.empty()) fail("IoFailure", "need at least one window");
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (!(windows[i].lo < windows[i].hi)) fail("IoFailure", "empty window");
        require_cusp_free(f, windows[i].lo, windows[i].hi);
        for (std::size_t j = i + 1; j < windows.size(); ++j)
            if (std::max(windows[i].lo, windows[j].lo) < std::min(windows[i].hi, windows[j].hi))
                fail("IoFailure", "windows overlap");
    }
    const double delta = target - signed_area(f);
    if (std::abs(delta) <= 1e-13 * std::max(1.0, std::abs(target))) {
        if (plan_out) *plan_out = {};
        return f;
    }
    const LegendrianCurve base = front_to_leg(f);

    double total_len = 0.0;
    for (const Window& w : windows) total_len += w.hi - w.lo;

    for (int k = 1; 2 * k <= opts.n_max; ++k) {
        const int N = 2 * k;
        // distribute slots across windows proportionally to length
        std::vector<double> centers, widths;
        int assigned = 0;
        for (std::size_t i = 0; i < windows.size(); ++i) {
            int ni = (i + 1 == windows.size())
                         ? N - assigned
                         : std::min(N - assigned,
                                    std::max(0, int(std::round(N * (windows[i].hi - windows[i].lo) /
                                                               total_len))));
            assigned += ni;
            const double len = (windows[i].hi - windows[i].lo) / std::max(1, ni);
            for (int s = 0; s < ni; ++s) {
                centers.push_back(windows[i].lo + (s + 0.5) * len);
                widths.push_back(0.40 * len);
            }
        }
        if (int(centers.size()) != N) continue;
        bool feasible = true;
        std::vector<double> caps(N);
        for (int s = 0; s < N; ++s) {
            try {
                caps[s] = r1_capacity(base, centers[s], widths[s], f.slope_bound);
            } catch (const Error&) {
                feasible = false;
                break;
            }
            if (caps[s] <= 0.0) feasible = false;
        }
        if (!feasible) continue;
        double worst_pair = 1e300;
        for (int p = 0; p < k; ++p) worst_pair = std::min(worst_pair, std::min(caps[2 * p], caps[2 * p + 1]));
        if (std::abs(delta) / k > opts.fill_frac * worst_pair) continue;

        std::vector<LoopSpec> specs;
        const double per_pair = delta / k;
        for (int p = 0; p < k; ++p) {
            const double b = opts.carrier_frac * std::min(caps[2 * p], caps[2 * p + 1]);
            const double u = std::max(per_pair, 0.0) + b;
            const double v = std::max(-per_pair, 0.0) + b;
            specs.push_back({centers[2 * p], widths[2 * p], u});
            specs.push_back({centers[2 * p + 1], widths[2 * p + 1], -v});
        }
        std::vector<double> marks;
        LegendrianCurve out = insert_r1_loops(base, specs, f.slope_bound, &marks);
        Front result = leg_to_front(out, f, std::move(marks));
        const double achieved = signed_area(result);
        if (std::abs(achieved - target) > 1e-10)
            fail("NumericallyDegenerate", "area adjustment missed the target by " +
                                              std::to_string(achieved - target));
        if (plan_out) {
            plan_out->slot_centers = centers;
            plan_out->slot_half_widths = widths;
            plan_out->n_loops = N;
        }
        return result;
    }
    fail("Infeasible", "target area change " + std::to_string(delta) +
                           " exceeds N_max times the per-loop capacity");
}

// ---------------------------------------------------------------------------
// Area-positivity certificate
// ---------------------------------------------------------------------------

namespace {

struct Poly {
    std::vector<Vec2> pts;          // closed: pts.front() == pts.back()
    std::vector<std::size_t> cusps; // indices into pts, cusp 0 at index 0
};

double poly_area(const std::vector<Vec2>& pts) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc += 0.5 * (pts[i].z + pts[i + 1].z) * (pts[i + 1].x - pts[i].x);
    return acc;
}

/// Rotates a closed front so the first cusp sits at index 0.
Poly to_poly(const Front& f) {
    if (!front_is_closed(f)) fail("NotClosed", "certificate needs a closed front");
    std::vector<double> marks = f.cusp_marks;
    if (marks.empty()) {
        const Front detected = detect_cusps(f.params, f.x, f.z, {});
        marks = detected.cusp_marks;
    }
    if (marks.size() < 3 || marks.size() % 2 == 0)
        fail("NotAdmissible", "cusp count " + std::to_string(marks.size()) + " is not odd and >= 3");

    const std::size_t m = f.size() - 1;  // distinct samples
    std::vector<std::size_t> cusp_idx;
    for (double c : marks) {
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t i = 0; i < m; ++i)
            if (std::abs(f.params[i] - c) < bd) {
                bd = std::abs(f.params[i] - c);
                best = i;
            }
        cusp_idx.push_back(best);
    }
    std::sort(cusp_idx.begin(), cusp_idx.end());
    const std::size_t shift = cusp_idx.front();

    Poly poly;
    poly.pts.reserve(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        const std::size_t j = (shift + i) % m;
        poly.pts.push_back({f.x[j], f.z[j]});
    }
    poly.pts.back() = poly.pts.front();
    for (std::size_t idx : cusp_idx) poly.cusps.push_back(idx - shift);
    return poly;
}

void check_admissible(const Poly& poly) {
    // tangent line rotates monotonically through pi
    std::vector<double> angles;
    for (std::size_t i = 0; i + 1 < poly.pts.size(); ++i) {
        const Vec2 d = poly.pts[i + 1] - poly.pts[i];
        if (d.norm() < 1e-15) continue;
        angles.push_back(std::atan2(d.z, d.x));
    }
    std::vector<double> unwrapped(angles.size());
    unwrapped[0] = std::remainder(angles[0], kPi);
    for (std::size_t i = 1; i < angles.size(); ++i) {
        double step = std::remainder(angles[i] - angles[i - 1], kPi);
        unwrapped[i] = unwrapped[i - 1] + step;
        if (step < -0.02)
            fail("NotAdmissible", "slope direction is not monotone (step " + std::to_string(step) + ")");
    }
    const double total = unwrapped.back() - unwrapped.front();
    if (std::abs(total - kPi) > 0.2)
        fail("NotAdmissible", "slope direction turns through " + std::to_string(total) +
                                  " instead of pi");
    // alternating cusps in z
    for (std::size_t j = 0; j + 1 < poly.cusps.size(); ++j) {
        const double z0 = poly.pts[poly.cusps[j]].z;
        const double z1 = poly.pts[poly.cusps[j + 1]].z;
        const bool rising = (j % 2 == 0);
        if (rising ? (z1 <= z0) : (z1 >= z0))
            fail("NotAdmissible", "cusp heights do not alternate");
    }
}

/// Direction of the tangent line at a cusp vertex, oriented so it points
/// out of the curve (against the incoming segment).
Vec2 cusp_direction(const Poly& poly, std::size_t idx) {
    const std::size_t n = poly.pts.size() - 1;
    const std::size_t prev = (idx + n - 1) % n;
    Vec2 din = poly.pts[idx] - poly.pts[prev];
    const double norm = din.norm();
    if (norm < 1e-15) fail("NumericallyDegenerate", "zero-length segment at a cusp");
    return din * (1.0 / norm);
}

/// Appends an area-neutral needle (out and back) at the cusp so its tip
/// reaches height z_target; returns the updated poly with the cusp index
/// moved to the tip.
void enlarge_cusp(Poly& poly, std::size_t cusp_pos, double z_target) {
    const std::size_t idx = poly.cusps[cusp_pos];
    const Vec2 q = poly.pts[idx];
    Vec2 d = cusp_direction(poly, idx);
    const double dz_needed = z_target - q.z;
    if (std::abs(dz_needed) < 1e-14) return;
    if (d.z * dz_needed < 0.0) d = d * -1.0;
    if (std::abs(d.z) < 1e-9)
        fail("NumericallyDegenerate", "cusp direction nearly horizontal; cannot extend");
    const double lambda = dz_needed / d.z;
    const int m = 6;
    std::vector<Vec2> needle;
    for (int i = 1; i <= m; ++i) needle.push_back(q + d * (lambda * double(i) / m));
    for (int i = m - 1; i >= 0; --i) needle.push_back(q + d * (lambda * double(i) / m));
    poly.pts.insert(poly.pts.begin() + std::ptrdiff_t(idx) + 1, needle.begin(), needle.end());
    for (std::size_t& c : poly.cusps)
        if (c > idx) c += needle.size();
    poly.cusps[cusp_pos] = idx + m;  // the tip
}

bool segment_intersection(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                          Vec2& point) {
    const Vec2 r = a1 - a0, s = b1 - b0;
    const double denom = cross(r, s);
    if (std::abs(denom) < 1e-18) return false;
    const Vec2 qp = b0 - a0;
    const double u = cross(qp, s) / denom;
    const double v = cross(qp, r) / denom;
    if (u <= 1e-12 || u >= 1.0 - 1e-12 || v <= 1e-12 || v >= 1.0 - 1e-12) return false;
    point = a0 + r * u;
    return true;
}

}  // namespace

AreaCertificate positive_area_certificate(const Front& f) {
    Poly poly = to_poly(f);
    check_admissible(poly);
    const double original_area = poly_area(poly.pts);

    AreaCertificate cert;
    while (poly.cusps.size() > 3) {
        // normalize cusp heights (skip the base cusp at index 0)
        double z_top = -1e300, z_bot = 1e300;
        for (std::size_t j = 1; j < poly.cusps.size(); ++j) {
            const double zc = poly.pts[poly.cusps[j]].z;
            if (j % 2 == 1)
                z_top = std::max(z_top, zc);
            else
                z_bot = std::min(z_bot, zc);
        }
        const double area_before_needles = poly_area(poly.pts);
        for (std::size_t j = 1; j < poly.cusps.size(); ++j)
            enlarge_cusp(poly, j, (j % 2 == 1) ? z_top : z_bot);
        const double area_after_needles = poly_area(poly.pts);
        if (std::abs(area_after_needles - area_before_needles) > 1e-10)
            fail("NumericallyDegenerate", "cusp enlargement failed to preserve area");

        // find the Reidemeister-I configuration between arcs (c1,c2) and (c3,c4)
        bool reduced = false;
        for (std::size_t i = 1; i + 3 < poly.cusps.size() + 0 && !reduced; i += 2) {
            if (i + 3 > poly.cusps.size() - 1 + 0) break;
            const std::size_t a_lo = poly.cusps[i], a_hi = poly.cusps[i + 1];
            const std::size_t b_lo = poly.cusps[i + 2], b_hi = poly.cusps[i + 3];
            for (std::size_t ai = a_lo; ai < a_hi && !reduced; ++ai) {
                for (std::size_t bi = b_lo; bi < b_hi; ++bi) {
                    Vec2 pstar;
                    if (!segment_intersection(poly.pts[ai], poly.pts[ai + 1], poly.pts[bi],
                                              poly.pts[bi + 1], pstar))
                        continue;
                    // removed loop: pstar -> a-tail -> middle arc -> b-head -> pstar
                    std::vector<Vec2> loop;
                    loop.push_back(pstar);
                    for (std::size_t k = ai + 1; k <= bi; ++k) loop.push_back(poly.pts[k]);
                    loop.push_back(pstar);
                    const double removed = poly_area(loop);
                    if (removed < -1e-10) continue;

                    ReductionStep step;
                    step.removed_area = removed;
                    step.cusps_before = int(poly.cusps.size());
                    step.removed_loop = loop;

                    std::vector<Vec2> next;
                    next.insert(next.end(), poly.pts.begin(), poly.pts.begin() + std::ptrdiff_t(ai) + 1);
                    next.push_back(pstar);
                    next.insert(next.end(), poly.pts.begin() + std::ptrdiff_t(bi) + 1, poly.pts.end());
                    std::vector<std::size_t> next_cusps;
                    for (std::size_t j = 0; j < poly.cusps.size(); ++j) {
                        if (j == i + 1 || j == i + 2) continue;  // removed pair
                        std::size_t c = poly.cusps[j];
                        if (c > bi) c = c - (bi - ai) + 1;
                        next_cusps.push_back(c);
                    }
                    poly.pts = std::move(next);
                    poly.cusps = std::move(next_cusps);
                    step.cusps_after = int(poly.cusps.size());
                    cert.reduction_trace.push_back(std::move(step));
                    reduced = true;
                    break;
                }
            }
        }
        if (!reduced)
            fail("NumericallyDegenerate", "no Reidemeister-I crossing could be localized");
    }

    const double base_area = poly_area(poly.pts);
    if (!(base_area > 0.0))
        fail("NotAdmissible", "three-cusp base case has non-positive area " +
                                  std::to_string(base_area));
    double total = base_area;
    for (const ReductionStep& s : cert.reduction_trace) total += s.removed_area;
    if (std::abs(total - original_area) > 1e-9 * std::max(1.0, std::abs(original_area)))
        fail("NumericallyDegenerate", "area bookkeeping mismatch in the reduction trace");
    cert.total_area = total;
    return cert;
}

// ---------------------------------------------------------------------------
// Admissible-front generator
// ---------------------------------------------------------------------------

Front generate_admissible_front(int n_cusps, std::uint64_t seed, std::size_t samples) {
    if (n_cusps < 3 || n_cusps % 2 == 0) fail("IoFailure", "cusp count must be odd and >= 3");
    Rng rng(seed);
    const std::size_t N = samples;
    const auto s = linspace(0.0, 1.0, N + 1);

    for (int attempt = 0; attempt < 64; ++attempt) {
        // cusp parameters snapped to the grid (cusp 0 at the seam); spacing by
        // stick-breaking so every draw respects the minimum gap
        const int interior = n_cusps - 1;
        std::vector<std::size_t> cusp_idx{0};
        {
            const double g_min = 0.55 / n_cusps;
            const double slack = 0.80 - (interior - 1) * g_min;
            std::vector<double> sticks(interior + 1);
            double total = 0.0;
            for (double& e : sticks) {
                e = 0.05 - std::log(1.0 - rng.uniform());
                total += e;
            }
            double cum = 0.0;
            for (int i = 0; i < interior; ++i) {
                cum += sticks[i];
                const double pos = 0.10 + i * g_min + slack * cum / total;
                cusp_idx.push_back(std::size_t(std::round(pos * N)));
            }
        }

        // strictly monotone angle through pi
        std::vector<double> omega(N + 1);
        const double w1 = rng.uniform(-0.45, 0.45), w2 = rng.uniform(-0.3, 0.3);
        for (std::size_t i = 0; i <= N; ++i)
            omega[i] = 1.0 + w1 * std::sin(2.0 * kPi * s[i]) + w2 * std::cos(2.0 * kPi * s[i]);
        auto h = cumtrapz(s, omega);
        std::vector<double> theta(N + 1);
        for (std::size_t i = 0; i <= N; ++i) theta[i] = kPi * h[i] / h.back();

        // alternating-sign speed segments vanishing at the cusps
        const int nseg = n_cusps;
        std::vector<double> amp(nseg);
        for (int i = 0; i < nseg; ++i) amp[i] = 1.0 + 0.6 * rng.uniform();
        auto segment_of = [&](std::size_t i) {
            int seg = nseg - 1;
            for (int q = 0; q + 1 < nseg; ++q)
                if (i >= cusp_idx[q] && i < cusp_idx[q + 1]) { seg = q; break; }
            return seg;
        };
        auto shape = [&](std::size_t i) {
            const int seg = segment_of(i);
            const double lo = s[cusp_idx[seg]];
            const double hi = (seg + 1 < nseg) ? s[cusp_idx[seg + 1]] : 1.0;
            const double sign = (seg % 2 == 0) ? 1.0 : -1.0;
            return sign * std::sin(kPi * (s[i] - lo) / (hi - lo));
        };

        // closure: solve two amplitudes so the discrete integral of c*e_theta vanishes
        bool solved = false;
        for (int pa = 0; pa < nseg && !solved; ++pa) {
            for (int pb = pa + 1; pb < nseg && !solved; ++pb) {
                double colx[2] = {0, 0}, colz[2] = {0, 0}, rhsx = 0, rhsz = 0;
                auto accumulate = [&](auto&& weight) {
                    double ax = 0, az = 0;
                    std::vector<double> vx(N + 1), vz(N + 1);
                    for (std::size_t i = 0; i <= N; ++i) {
                        const double w = weight(i);
                        vx[i] = w * std::cos(theta[i]);
                        vz[i] = w * std::sin(theta[i]);
                    }
                    ax = trapz(s, vx);
                    az = trapz(s, vz);
                    return std::pair<double, double>(ax, az);
                };
                auto [ax0, az0] = accumulate([&](std::size_t i) {
                    return segment_of(i) == pa ? shape(i) : 0.0;
                });
                auto [ax1, az1] = accumulate([&](std::size_t i) {
                    return segment_of(i) == pb ? shape(i) : 0.0;
                });
                auto [rx, rz] = accumulate([&](std::size_t i) {
                    const int seg = segment_of(i);
                    return (seg == pa || seg == pb) ? 0.0 : amp[seg] * shape(i);
                });
                colx[0] = ax0; colx[1] = ax1;
                colz[0] = az0; colz[1] = az1;
                rhsx = -rx; rhsz = -rz;
                const double det = colx[0] * colz[1] - colx[1] * colz[0];
                if (std::abs(det) < 1e-8) continue;
                const double a = (rhsx * colz[1] - colx[1] * rhsz) / det;
                const double b = (colx[0] * rhsz - rhsx * colz[0]) / det;
                if (a < 0.25 || b < 0.25 || a > 8.0 || b > 8.0) continue;
                amp[pa] = a;
                amp[pb] = b;
                solved = true;
            }
        }
        if (!solved) continue;

        std::vector<double> vx(N + 1), vz(N + 1);
        for (std::size_t i = 0; i <= N; ++i) {
            const double c = amp[segment_of(i)] * shape(i);
            vx[i] = c * std::cos(theta[i]);
            vz[i] = c * std::sin(theta[i]);
        }
        Front f;
        f.params = s;
        f.x = cumtrapz(s, vx);
        f.z = cumtrapz(s, vz);
        // discrete closure is exact by the solve; snap the seam bit-exactly
        f.x.back() = f.x.front();
        f.z.back() = f.z.front();
        for (std::size_t idx : cusp_idx) f.cusp_marks.push_back(s[idx]);
        std::sort(f.cusp_marks.begin(), f.cusp_marks.end());
        return f;
    }
    fail("NoConvergence", "admissible-front generator exhausted its attempts");
}

}  // namespace engel::fronts
