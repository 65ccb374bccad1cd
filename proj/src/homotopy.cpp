#include "engel/homotopy.hpp"

#include <algorithm>
#include <cmath>

#include "engel/numerics.hpp"

namespace engel::homotopy {

namespace {

struct LoopTangentData {
    std::vector<double> theta;  // unwrapped tangent angle
    std::vector<double> logv;   // log speed
    int winding = 0;
};

LoopTangentData tangent_data(const PlaneLoop& l) {
    const auto du = fd_derivative(l.params, l.u, true);
    const auto dv = fd_derivative(l.params, l.v, true);
    std::vector<double> raw(l.params.size());
    LoopTangentData out;
    out.logv.resize(l.params.size());
    for (std::size_t i = 0; i < l.params.size(); ++i) {
        const double speed = std::hypot(du[i], dv[i]);
        if (speed < 1e-12) fail("DegenerateSpeed", "plane loop not immersed at grid resolution");
        raw[i] = std::atan2(dv[i], du[i]);
        out.logv[i] = std::log(speed);
    }
    out.theta = unwrap_angles(raw, 2.0 * kPi, 0.5 * kPi, "plane winding");
    const double total = out.theta.back() - out.theta.front();
    out.winding = int(std::lround(total / (2.0 * kPi)));
    if (std::abs(total / (2.0 * kPi) - out.winding) > 1e-6)
        fail("NoConvergence", "tangent winding is not an integer");
    return out;
}

}  // namespace

int plane_winding(const PlaneLoop& l) { return tangent_data(l).winding; }

std::vector<PlaneLoop> wg_homotopy(const PlaneLoop& l0, const PlaneLoop& l1,
                                   const std::vector<double>& time_grid) {
    if (l0.params.size() != l1.params.size())
        fail("IoFailure", "the two loops must share one sample grid");
    const std::size_t n = l0.params.size();
    LoopTangentData d0 = tangent_data(l0);
    LoopTangentData d1 = tangent_data(l1);
    if (d0.winding != d1.winding)
        fail("WindingMismatch", "windings " + std::to_string(d0.winding) + " and " +
                                    std::to_string(d1.winding) + " differ");
    // align the branch of the second angle function
    const double shift = 2.0 * kPi * std::round((d0.theta[0] - d1.theta[0]) / (2.0 * kPi));
    for (double& a : d1.theta) a += shift;

    auto slice_tangent = [&](double tau) {
        std::vector<double> wu(n), wv(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double th = (1.0 - tau) * d0.theta[i] + tau * d1.theta[i];
            const double v = std::exp((1.0 - tau) * d0.logv[i] + tau * d1.logv[i]);
            wu[i] = v * std::cos(th);
            wv[i] = v * std::sin(th);
        }
        const double mu = trapz(l0.params, wu), mv = trapz(l0.params, wv);
        for (std::size_t i = 0; i < n; ++i) {
            wu[i] -= mu;
            wv[i] -= mv;
        }
        return std::pair<std::vector<double>, std::vector<double>>(std::move(wu), std::move(wv));
    };

    auto [w0u, w0v] = slice_tangent(0.0);
    auto [w1u, w1v] = slice_tangent(1.0);

    std::vector<PlaneLoop> fam;
    fam.reserve(time_grid.size());
    for (double tau : time_grid) {
        PlaneLoop s;
        s.params = l0.params;
        if (tau == 0.0) {
            s.u = l0.u;
            s.v = l0.v;
        } else if (tau == 1.0) {
            s.u = l1.u;
            s.v = l1.v;
        } else {
            auto [wu, wv] = slice_tangent(tau);
            // blend position corrections so both endpoint slices are exact
            std::vector<double> au(n), av(n), bu(n), bv(n);
            for (std::size_t i = 0; i < n; ++i) {
                au[i] = wu[i] - w0u[i];
                av[i] = wv[i] - w0v[i];
                bu[i] = wu[i] - w1u[i];
                bv[i] = wv[i] - w1v[i];
            }
            const auto cau = cumtrapz(l0.params, au), cav = cumtrapz(l0.params, av);
            const auto cbu = cumtrapz(l0.params, bu), cbv = cumtrapz(l0.params, bv);
            s.u.resize(n);
            s.v.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                s.u[i] = (1.0 - tau) * (l0.u[i] + cau[i]) + tau * (l1.u[i] + cbu[i]);
                s.v[i] = (1.0 - tau) * (l0.v[i] + cav[i]) + tau * (l1.v[i] + cbv[i]);
            }
            // exact closure: both input loops close and the corrections have
            // zero discrete mean; snap the seam against roundoff
            s.u.back() = s.u.front();
            s.v.back() = s.v.front();
        }
        fam.push_back(std::move(s));
    }
    return fam;
}

double family_min_speed(const std::vector<PlaneLoop>& fam) {
    double worst = 1e300;
    for (const PlaneLoop& l : fam) {
        const auto du = fd_derivative(l.params, l.u, true);
        const auto dv = fd_derivative(l.params, l.v, true);
        double mean = 0.0, lo = 1e300;
        for (std::size_t i = 0; i < l.params.size(); ++i) {
            const double sp = std::hypot(du[i], dv[i]);
            mean += sp;
            lo = std::min(lo, sp);
        }
        mean /= double(l.params.size());
        worst = std::min(worst, lo / mean);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// connect_loops
// ---------------------------------------------------------------------------

namespace {

struct SliceData {
    std::vector<double> x, z, t;
};

/// Zeroes the discrete integral of t dx (the z-closure of the Legendrian) by
/// the least-norm periodic correction to t over the first few harmonics.
void zero_t_dx(const std::vector<double>& params, const std::vector<double>& x,
               std::vector<double>& t) {
    const double defect = trapz_du(t, x);
    if (std::abs(defect) < 1e-15) return;
    const std::size_t n = params.size();
    const int modes = 8;
    std::vector<std::vector<double>> G(modes, std::vector<double>(n));
    std::vector<double> coupling(modes);
    double norm2 = 0.0;
    for (int m = 0; m < modes; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = 2.0 * kPi * (1 + m / 2) * params[i];
            G[m][i] = (m % 2 == 0) ? std::cos(a) : std::sin(a);
        }
        coupling[m] = trapz_du(G[m], x);
        norm2 += coupling[m] * coupling[m];
    }
    if (norm2 < 1e-20)
        fail("NumericallyDegenerate", "no harmonic couples to the z-closure defect");
    for (int m = 0; m < modes; ++m) {
        const double mu = -defect * coupling[m] / norm2;
        for (std::size_t i = 0; i < n; ++i) t[i] += mu * G[m][i];
    }
}

}  // namespace

HomotopyFamily connect_loops(const SampledCurve& c0, const SampledCurve& c1,
                             const ConnectOptions& opts) {
    const auto darboux = EngelModel::darboux();
    for (const SampledCurve* c : {&c0, &c1}) {
        if (!c->closed) fail("NotHorizontalInput", "inputs must be closed loops");
        const double r = horizontality_residual(*c, darboux);
        if (r > opts.input_residual_tol)
            fail("NotHorizontalInput", "input residual " + std::to_string(r) + " exceeds " +
                                           std::to_string(opts.input_residual_tol));
        if (tangency_locus(*c, darboux).cls == TangencyClass::EverywhereTangent)
            fail("NotHorizontalInput", "input is everywhere tangent to the kernel");
    }
    const int rot0 = rotation_number(c0, darboux);
    const int rot1 = rotation_number(c1, darboux);
    if (rot0 != rot1)
        fail("RotationMismatch", "rotation numbers " + std::to_string(rot0) + " and " +
                                     std::to_string(rot1) + " differ");
    if (c0.size() != c1.size()) fail("IoFailure", "loops must share one sample grid");

    const LegendrianCurve L0 = geiges_project(c0, opts.input_residual_tol);
    const LegendrianCurve L1 = geiges_project(c1, opts.input_residual_tol);

    double slope_bound = opts.slope_bound;
    if (slope_bound <= 0.0) {
        double m = 0.0;
        for (double tv : L0.t) m = std::max(m, std::abs(tv));
        for (double tv : L1.t) m = std::max(m, std::abs(tv));
        slope_bound = std::max(0.5, 1.3 * m + 0.1);
    } else {
        for (double tv : L0.t)
            if (std::abs(tv) > slope_bound)
                fail("SlopeBandExceeded", "first loop leaves the slope band");
        for (double tv : L1.t)
            if (std::abs(tv) > slope_bound)
                fail("SlopeBandExceeded", "second loop leaves the slope band");
    }

    // Step I: interpolate the (x, t)-projections (cusp-free by horizontality)
    PlaneLoop p0{L0.params, L0.x, L0.t}, p1{L1.params, L1.x, L1.t};
    HomotopyFamily fam;
    fam.time_grid = linspace(0.0, 1.0, opts.slices);
    const auto plane = wg_homotopy(p0, p1, fam.time_grid);

    const std::size_t n = L0.params.size();
    const std::size_t nt = fam.time_grid.size();
    std::vector<SliceData> data(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        const double tau = fam.time_grid[k];
        data[k].x = plane[k].u;
        data[k].t = plane[k].v;
        if (k == 0) {
            data[k].z = L0.z;
        } else if (k + 1 == nt) {
            data[k].z = L1.z;
        } else {
            zero_t_dx(L0.params, data[k].x, data[k].t);
            const double zstart = (1.0 - tau) * L0.z.front() + tau * L1.z.front();
            data[k].z = cumtrapz_du(data[k].t, data[k].x, zstart);
            data[k].z.back() = data[k].z.front();
        }
        for (double tv : data[k].t)
            if (std::abs(tv) > slope_bound)
                fail("SlopeBandExceeded", "interpolated slice leaves the slope band");
    }

    // Step III preparation: windows transverse to the kernel across all slices
    std::vector<double> score(n, 1e300), zworst(n, 0.0);
    double zscale = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        const auto dx = fd_derivative(L0.params, data[k].x, true);
        const auto dt = fd_derivative(L0.params, data[k].t, true);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += std::hypot(dx[i], dt[i]);
        mean /= double(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double transversality = std::abs(dx[i]) / mean;
            const double headroom = (slope_bound - std::abs(data[k].t[i])) / slope_bound;
            score[i] = std::min(score[i], std::min(transversality, headroom));
            zworst[i] = std::max(zworst[i], std::abs(data[k].z[i]));
            zscale = std::max(zscale, std::abs(data[k].z[i]));
        }
    }
    std::vector<fronts::Window> windows;
    {
        struct Run {
            double lo, hi, zmax;
        };
        std::vector<Run> runs;
        for (double cut : {0.30, 0.20, 0.12}) {
            runs.clear();
            std::size_t i = 0;
            while (i < n) {
                if (score[i] <= cut) {
                    ++i;
                    continue;
                }
                std::size_t j = i;
                double zmax = 0.0;
                while (j + 1 < n && score[j + 1] > cut) {
                    zmax = std::max(zmax, zworst[j]);
                    ++j;
                }
                const double lo = std::max(L0.params[i], 0.003);
                const double hi = std::min(L0.params[j], 0.997);
                if (hi - lo > 0.035) runs.push_back({lo, hi, zmax});
                i = j + 1;
            }
            if (runs.size() >= 2) break;  // strong windows found
        }
        // prefer runs where the front stays near z = 0 (the lift's quadrature
        // error at a cusp scales with |z|), then longer runs
        std::sort(runs.begin(), runs.end(), [&](const Run& a, const Run& b) {
            const bool a_low = a.zmax < 0.5 * zscale, b_low = b.zmax < 0.5 * zscale;
            if (a_low != b_low) return a_low;
            return a.hi - a.lo > b.hi - b.lo;
        });
        if (runs.size() > 4) runs.resize(4);
        std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.lo < b.lo; });
        for (const Run& r : runs) windows.push_back({r.lo, r.hi});
    }

    // worst-slice area decides the shared loop count
    double worst_delta = 0.0;
    std::vector<double> deltas(nt, 0.0);
    for (std::size_t k = 0; k < nt; ++k) {
        deltas[k] = -trapz_du(data[k].z, data[k].x);
        worst_delta = std::max(worst_delta, std::abs(deltas[k]));
    }

    fronts::AreaAdjustPlan plan;
    const fronts::AreaAdjustOptions aopts;
    if (worst_delta > 1e-13) {
        if (windows.empty()) {
            // No window is transverse across the whole family (the tangency
            // pattern sweeps the circle as time varies). Build the middle
            // slice as a genuine horizontal loop using its own windows and
            // connect through it.
            if (opts.max_subdivisions <= 0)
                fail("NoCuspFreeWindow",
                     "no window transverse to the kernel survives across the family");
            const std::size_t mid = nt / 2;
            LegendrianCurve lm;
            lm.params = L0.params;
            lm.x = data[mid].x;
            lm.z = data[mid].z;
            lm.t = data[mid].t;
            lm.closed = true;
            // per-slice window search on the middle slice alone
            std::vector<fronts::Window> own;
            {
                const auto dx = fd_derivative(lm.params, lm.x, true);
                const auto dt = fd_derivative(lm.params, lm.t, true);
                double mean = 0.0;
                for (std::size_t i = 0; i < n; ++i) mean += std::hypot(dx[i], dt[i]);
                mean /= double(n);
                std::size_t i = 0;
                while (i < n) {
                    if (std::abs(dx[i]) / mean <= 0.15) {
                        ++i;
                        continue;
                    }
                    std::size_t j = i;
                    while (j + 1 < n && std::abs(dx[j + 1]) / mean > 0.15) ++j;
                    if (lm.params[j] - lm.params[i] > 0.06 && lm.params[i] > 0.005 &&
                        lm.params[j] < 0.995)
                        own.push_back({lm.params[i] + 0.005, lm.params[j] - 0.005});
                    i = j + 1;
                }
            }
            if (own.empty())
                fail("NoCuspFreeWindow", "the middle slice has no transverse window either");
            // one alternating pair inside the longest own-window, solved at
            // the Legendrian level so the slopes stay exact
            std::sort(own.begin(), own.end(), [](const fronts::Window& a, const fronts::Window& b) {
                return a.hi - a.lo > b.hi - b.lo;
            });
            const double mid_delta = -trapz_du(lm.z, lm.x);
            LegendrianCurve lz = lm;
            if (std::abs(mid_delta) > 1e-13) {
                const fronts::Window w0 = own.front();
                const double len = w0.hi - w0.lo;
                const double hw = 0.2 * len;
                const double cA = w0.lo + 0.3 * len, cB = w0.lo + 0.7 * len;
                const double cap = std::min(fronts::r1_capacity(lm, cA, hw, slope_bound),
                                            fronts::r1_capacity(lm, cB, hw, slope_bound));
                const double carrier = 0.15 * cap;
                std::vector<fronts::LoopSpec> specs{
                    {cA, hw, std::max(mid_delta, 0.0) + carrier},
                    {cB, hw, -(std::max(-mid_delta, 0.0) + carrier)}};
                lz = fronts::insert_r1_loops(lm, specs, slope_bound, nullptr);
            }
            const SampledCurve mid_curve =
                geiges_lift(lz, 0.5 * (c0.points.front().y + c1.points.front().y));
            ConnectOptions half = opts;
            half.max_subdivisions = opts.max_subdivisions - 1;
            half.slices = opts.slices / 2 + 1;
            const HomotopyFamily left = connect_loops(c0, mid_curve, half);
            const HomotopyFamily right = connect_loops(mid_curve, c1, half);
            HomotopyFamily glued;
            glued.r1_loops_per_slice = std::max(left.r1_loops_per_slice, right.r1_loops_per_slice);
            for (std::size_t k = 0; k < left.slices.size(); ++k) {
                glued.time_grid.push_back(0.5 * left.time_grid[k]);
                glued.slices.push_back(left.slices[k]);
                glued.report.push_back(left.report[k]);
                glued.loop_amplitudes.push_back(left.loop_amplitudes[k]);
            }
            for (std::size_t k = 1; k < right.slices.size(); ++k) {
                glued.time_grid.push_back(0.5 + 0.5 * right.time_grid[k]);
                glued.slices.push_back(right.slices[k]);
                glued.report.push_back(right.report[k]);
                glued.loop_amplitudes.push_back(right.loop_amplitudes[k]);
            }
            return glued;
        }
        // capacity planning against the worst slice, shared slot layout
        fronts::Front worst_front;
        std::size_t worst_k = 0;
        for (std::size_t k = 0; k < nt; ++k)
            if (std::abs(deltas[k]) == worst_delta) worst_k = k;
        worst_front.params = L0.params;
        worst_front.x = data[worst_k].x;
        worst_front.z = data[worst_k].z;
        worst_front.slope_bound = slope_bound;
        try {
            fronts::adjust_area_to(worst_front, 0.0, windows, aopts, &plan);
        } catch (const Error& e) {
            if (e.token() == "Infeasible")
                fail("AreaInfeasible", std::string("worst-slice area adjustment: ") + e.what());
            throw;
        }
    }

    // apply the shared plan slice by slice with tapered carriers
    fam.slices.resize(nt);
    fam.report.resize(nt);
    fam.r1_loops_per_slice = plan.n_loops;
    fam.loop_amplitudes.assign(nt, 0.0);
    for (std::size_t k = 0; k < nt; ++k) {
        const double tau = fam.time_grid[k];
        LegendrianCurve leg;
        leg.params = L0.params;
        leg.x = data[k].x;
        leg.z = data[k].z;
        leg.t = data[k].t;
        leg.closed = true;

        const double delta = -trapz_du(leg.z, leg.x);
        if (std::abs(delta) > 1e-13 && plan.n_loops > 0) {
            const int pairs = plan.n_loops / 2;
            // the carrier keeps every inserted loop non-degenerate (cusp
            // slope stays bounded away from zero); taper toward the ends but
            // never below the floor, and escalate when a crossing comes out
            // too flat for the tangent direction to stay resolved
            const double ramp =
                std::max(0.35, std::min(1.0, 8.0 * std::min(tau, 1.0 - tau)));
            std::vector<double> caps(plan.n_loops);
            for (int sL = 0; sL < plan.n_loops; ++sL)
                caps[sL] = fronts::r1_capacity(leg, plan.slot_centers[sL],
                                               plan.slot_half_widths[sL], slope_bound);
            bool inserted = false;
            const double esc_seq[] = {1.0, 0.35, 2.5, 0.12, 6.0, 0.04};
            for (int attempt = 0; attempt < 6 && !inserted; ++attempt) {
                const double esc = esc_seq[attempt];
                std::vector<fronts::LoopSpec> specs;
                double amp_max = 0.0;
                bool feasible = true;
                for (int p = 0; p < pairs; ++p) {
                    const double cap = std::min(caps[2 * p], caps[2 * p + 1]);
                    const double carrier =
                        std::min(aopts.carrier_frac * esc, 0.6) * cap * ramp;
                    const double net = delta / pairs;
                    const double u = std::max(net, 0.0) + carrier;
                    const double v = std::max(-net, 0.0) + carrier;
                    if (u > 0.95 * cap || v > 0.95 * cap) feasible = false;
                    specs.push_back({plan.slot_centers[2 * p], plan.slot_half_widths[2 * p], u});
                    specs.push_back(
                        {plan.slot_centers[2 * p + 1], plan.slot_half_widths[2 * p + 1], -v});
                    amp_max = std::max({amp_max, u, v});
                }
                if (!feasible) break;
                LegendrianCurve trial = fronts::insert_r1_loops(leg, specs, slope_bound, nullptr);
                // tangent direction of the (x, t)-trace must stay resolved
                const auto dx = fd_derivative(trial.params, trial.x, true);
                const auto dt = fd_derivative(trial.params, trial.t, true);
                double step_max = 0.0;
                for (std::size_t i = 0; i + 1 < trial.size(); ++i) {
                    const double d = std::remainder(
                        std::atan2(dt[i + 1], dx[i + 1]) - std::atan2(dt[i], dx[i]), 2.0 * kPi);
                    step_max = std::max(step_max, std::abs(d));
                }
                if (step_max < 1.2) {
                    leg = std::move(trial);
                    fam.loop_amplitudes[k] = amp_max;
                    inserted = true;
                }
            }
            if (!inserted)
                fail("NumericallyDegenerate",
                     "could not keep the loop crossings resolved at this resolution");
        }
        const double area_after = trapz_du(leg.z, leg.x);

        SampledCurve slice;
        if (k == 0 && std::abs(delta) <= 1e-13) {
            slice = c0;
        } else if (k + 1 == nt && std::abs(delta) <= 1e-13) {
            slice = c1;
        } else {
            const double y0 = (1.0 - tau) * c0.points.front().y + tau * c1.points.front().y;
            slice = geiges_lift(leg, y0);
        }
        fam.report[k].front_area = area_after;
        fam.report[k].residual = horizontality_residual(slice, darboux);
        fam.report[k].closure = (slice.points.back() - slice.points.front()).norm();
        fam.report[k].rotation = rotation_number(slice, darboux);
        fam.report[k].tangency = tangency_locus(slice, darboux).cls;
        fam.slices[k] = std::move(slice);
    }
    return fam;
}

FamilyCheck verify_family(const HomotopyFamily& h, const EngelModel& m, double tol_residual,
                          double tol_closure) {
    FamilyCheck out;
    out.report.resize(h.slices.size());
    out.rotation_constant = true;
    int rot_ref = 0;
    for (std::size_t k = 0; k < h.slices.size(); ++k) {
        SliceReport& r = out.report[k];
        r.residual = horizontality_residual(h.slices[k], m);
        r.closure = (h.slices[k].points.back() - h.slices[k].points.front()).norm();
        r.rotation = rotation_number(h.slices[k], m);
        r.tangency = tangency_locus(h.slices[k], m).cls;
        out.worst_residual = std::max(out.worst_residual, r.residual);
        out.worst_closure = std::max(out.worst_closure, r.closure);
        if (k == 0) rot_ref = r.rotation;
        const bool bad = r.residual > tol_residual || r.closure > tol_closure ||
                         r.rotation != rot_ref;
        if (r.rotation != rot_ref) out.rotation_constant = false;
        if (bad && out.first_bad_slice < 0) out.first_bad_slice = int(k);
    }
    out.pass = out.first_bad_slice < 0 && out.rotation_constant && !h.slices.empty();
    return out;
}

}  // namespace engel::homotopy
