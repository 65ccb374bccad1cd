#include "engel/curves.hpp"

#include <algorithm>
#include <cmath>

#include "engel/numerics.hpp"

namespace engel {

std::vector<Vec4> curve_tangents(const SampledCurve& c) {
    return fd_derivative(c.params, c.points, c.closed);
}

static double mean_speed(const std::vector<Vec4>& tangents) {
    double acc = 0.0;
    for (const Vec4& v : tangents) acc += v.norm();
    return acc / double(tangents.size());
}

void validate_curve(const SampledCurve& c, const EngelModel* model) {
    if (c.params.size() != c.points.size())
        fail("IoFailure", "params/points length mismatch");
    if (c.params.size() < 3) fail("IoFailure", "curve needs at least 3 samples");
    for (std::size_t i = 0; i + 1 < c.params.size(); ++i)
        if (!(c.params[i] < c.params[i + 1]))
            fail("IoFailure", "parameter grid must be strictly increasing");
    for (const Point4& p : c.points) require_finite(p, "curve sample");
    if (c.closed) {
        const double gap = (c.points.back() - c.points.front()).norm();
        if (gap > 1e-10)
            fail("NotClosed", "closed flag set but endpoint gap is " + std::to_string(gap));
        if (c.has_framing() && (c.framing.back() - c.framing.front()).norm() > 1e-10)
            fail("NotClosed", "closed flag set but framing endpoints differ");
    }
    const auto tangents = curve_tangents(c);
    const double floor = kSpeedFloor * mean_speed(tangents);
    for (const Vec4& v : tangents)
        if (v.norm() < floor)
            fail("DegenerateSpeed", "finite-difference speed below the immersion floor");
    if (c.has_framing()) {
        if (c.framing.size() != c.points.size())
            fail("IoFailure", "framing length mismatch");
        for (std::size_t i = 0; i < c.framing.size(); ++i) {
            if (c.framing[i].norm() < 1e-8)
                fail("VanishingSection", "formal section vanishes at sample " + std::to_string(i));
            if (model) {
                const CoframePair cf = model->coframe_at(c.points[i]);
                const double r = std::abs(eval_form(cf.alpha, c.framing[i])) +
                                 std::abs(eval_form(cf.beta, c.framing[i]));
                if (r > 1e-8)
                    fail("NotHorizontal", "formal section leaves D at sample " + std::to_string(i));
            }
        }
    }
}

double horizontality_residual(const SampledCurve& c, const EngelModel& m) {
    if (c.params.size() < 8) fail("IoFailure", "need at least 8 samples");
    const auto tangents = curve_tangents(c);
    const double floor = kSpeedFloor * mean_speed(tangents);
    double worst = 0.0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        const double speed = tangents[i].norm();
        if (!(speed > floor) || !(speed > 0.0))
            fail("DegenerateSpeed", "speed below floor at sample " + std::to_string(i));
        const CoframePair cf = m.coframe_at(c.points[i]);
        const double num = std::abs(eval_form(cf.alpha, tangents[i])) +
                           std::abs(eval_form(cf.beta, tangents[i]));
        worst = std::max(worst, num / speed);
    }
    return worst;
}

std::string to_string(TangencyClass c) {
    switch (c) {
        case TangencyClass::EverywhereTangent: return "EverywhereTangent";
        case TangencyClass::NotEverywhereTangent: return "NotEverywhereTangent";
        case TangencyClass::Generic: return "Generic";
        case TangencyClass::Transverse: return "Transverse";
    }
    return "?";
}

/// Unoriented angle between a tangent vector and the kernel line.
static double kernel_angle(const Vec4& v, const Vec4& w) {
    const double c = std::abs(dot(v, w)) / (v.norm() * w.norm());
    return std::acos(std::clamp(c, -1.0, 1.0));
}

TangencyLocus tangency_locus(const SampledCurve& c, const EngelModel& m, double tol_angle) {
    const auto tangents = curve_tangents(c);
    const double floor = kSpeedFloor * mean_speed(tangents);
    const std::size_t n = c.points.size();
    std::vector<bool> flagged(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (tangents[i].norm() < floor) fail("DegenerateSpeed", "curve not immersed at grid resolution");
        flagged[i] = kernel_angle(tangents[i], m.kernel_at(c.points[i])) < tol_angle;
    }

    TangencyLocus out;
    bool all = true, any = false, has_long_run = false;
    std::size_t i = 0;
    while (i < n) {
        if (!flagged[i]) {
            all = false;
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && flagged[j + 1]) ++j;
        any = true;
        if (j > i) has_long_run = true;
        out.intervals.emplace_back(c.params[i], c.params[j]);
        i = j + 1;
    }
    if (all)
        out.cls = TangencyClass::EverywhereTangent;
    else if (!any)
        out.cls = TangencyClass::Transverse;
    else if (!has_long_run)
        out.cls = TangencyClass::Generic;
    else
        out.cls = TangencyClass::NotEverywhereTangent;
    return out;
}

int rotation_number(const SampledCurve& c, const EngelModel& m) {
    if (!c.closed) fail("NotClosed", "rotation number needs a closed curve");
    const std::size_t n = c.points.size();
    std::vector<Vec4> section;
    if (c.has_framing())
        section = c.framing;
    else
        section = curve_tangents(c);

    std::vector<double> angles(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec4 w = m.kernel_at(c.points[i]);
        Vec4 cm = m.complement_at(c.points[i]);
        w = w * (1.0 / w.norm());
        cm = cm * (1.0 / cm.norm());
        // least-squares coordinates of the section in span(w, cm)
        const double gww = 1.0, gwc = dot(w, cm), gcc = 1.0;
        const double rw = dot(section[i], w), rc = dot(section[i], cm);
        const double det = gww * gcc - gwc * gwc;
        const double a = (rw * gcc - gwc * rc) / det;
        const double b = (gww * rc - gwc * rw) / det;
        if (std::hypot(a, b) < 1e-10)
            fail("VanishingSection", "tangent/section vanishes in the frame at sample " +
                                         std::to_string(i));
        angles[i] = std::atan2(a, b);  // (kernel coefficient, complement coefficient)
    }
    const auto unwrapped = unwrap_angles(angles, 2.0 * kPi, 0.5 * kPi, "rotation number");
    const double total = unwrapped.back() - unwrapped.front();
    const double winding = total / (2.0 * kPi);
    const double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 1e-6)
        fail("NoConvergence", "tangent winding " + std::to_string(winding) + " is not an integer");
    return int(rounded);
}

double developing_total_angle(const SampledCurve& seg, const EngelModel& m) {
    if (seg.points.size() < 2) return 0.0;
    std::vector<double> angles(seg.points.size());
    for (std::size_t i = 0; i < seg.points.size(); ++i)
        angles[i] = m.developing_angle_at(seg.points[i]);
    const auto unwrapped = unwrap_angles(angles, kPi, 0.25 * kPi, "developing map");
    return unwrapped.back() - unwrapped.front();
}

int developing_turns(const SampledCurve& seg, const EngelModel& m) {
    if (seg.points.size() < 2) return 0;
    if (seg.points.size() >= 3) {
        const TangencyLocus locus = tangency_locus(seg, m);
        if (locus.cls != TangencyClass::EverywhereTangent)
            fail("NotKernelTangent", "segment is not everywhere tangent to the kernel (class " +
                                         to_string(locus.cls) + ")");
    }
    const double total = developing_total_angle(seg, m);
    const int turns = int(std::floor(std::abs(total) / kPi + 1e-9));
    return total >= 0 ? turns : -turns;
}

// ---------------------------------------------------------------------------
// Genericity perturbation machinery
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> tangency_indicator(const FamilyOfCurves& fam, const EngelModel& m,
                                                    double tol_angle) {
    std::vector<std::vector<double>> g(fam.curves.size());
    for (std::size_t i = 0; i < fam.curves.size(); ++i) {
        const auto tangents = curve_tangents(fam.curves[i]);
        g[i].resize(tangents.size());
        for (std::size_t j = 0; j < tangents.size(); ++j)
            g[i][j] = kernel_angle(tangents[j], m.kernel_at(fam.curves[i].points[j])) - tol_angle;
    }
    return g;
}

struct Cell {
    std::size_t i, j;
};

std::vector<Cell> offending_cells(const std::vector<std::vector<double>>& g,
                                  const std::vector<double>& s, const GenericityOptions& opts) {
    std::vector<Cell> out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j + 1 < g[i].size(); ++j) {
            const double c0 = g[i][j], c1 = g[i][j + 1];
            if (std::max(std::abs(c0), std::abs(c1)) >= opts.tol_g) continue;
            const double dsg = (c1 - c0) / (s[j + 1] - s[j]);
            if (std::abs(dsg) >= opts.tol_dg) continue;
            if (c0 * c1 > 0.0) out.push_back({i, j});
        }
    }
    return out;
}

/// Adds a smooth t-bump to a Darboux/Lorentzian curve and re-integrates the
/// dependent coordinates so the member stays horizontal with the x-projection
/// fixed.
void apply_t_bump(SampledCurve& c, const EngelModel& m, double center, double width, double amp) {
    const std::size_t n = c.params.size();
    std::vector<double> dt(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = (c.params[j] - center) / width;
        if (std::abs(u) < 1.0) {
            const double w = std::cos(0.5 * kPi * u);
            dt[j] = amp * w * w;
        }
    }
    std::vector<double> x(n), t_old(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = c.points[j].x;
        t_old[j] = c.points[j].t;
    }
    if (m.kind() == ModelKind::Darboux) {
        // z' = t x', y' = z x': integrate the correction against x
        const auto dz = cumtrapz_du(dt, x);
        std::vector<double> dz_vals(n);
        for (std::size_t j = 0; j < n; ++j) dz_vals[j] = dz[j];
        const auto dy = cumtrapz_du(dz_vals, x);
        for (std::size_t j = 0; j < n; ++j) {
            c.points[j].t += dt[j];
            c.points[j].z += dz[j];
            c.points[j].y += dy[j];
        }
    } else if (m.kind() == ModelKind::Lorentzian) {
        // y' = t x', z' = t^2 x'
        const auto dy = cumtrapz_du(dt, x);
        std::vector<double> d2(n);
        for (std::size_t j = 0; j < n; ++j)
            d2[j] = 2.0 * t_old[j] * dt[j] + dt[j] * dt[j];
        const auto dz = cumtrapz_du(d2, x);
        for (std::size_t j = 0; j < n; ++j) {
            c.points[j].t += dt[j];
            c.points[j].y += dy[j];
            c.points[j].z += dz[j];
        }
    } else {
        fail("IoFailure", "make_generic supports the Darboux and Lorentzian models");
    }
}

}  // namespace

bool tangency_indicator_transverse(const FamilyOfCurves& fam, const EngelModel& m,
                                   const GenericityOptions& opts) {
    const auto g = tangency_indicator(fam, m, opts.tol_angle);
    return offending_cells(g, fam.curves.front().params, opts).empty();
}

GenericityReport make_generic(const FamilyOfCurves& fam, const EngelModel& m, double delta,
                              const GenericityOptions& opts) {
    if (!(delta > 0.0)) fail("IoFailure", "perturbation budget must be positive");
    for (std::size_t i = 0; i < fam.curves.size(); ++i) {
        const TangencyLocus locus = tangency_locus(fam.curves[i], m, opts.tol_angle);
        if (locus.cls == TangencyClass::EverywhereTangent)
            fail("EverywhereTangentMember", "family member " + std::to_string(i) +
                                                " is everywhere tangent to the kernel");
    }

    GenericityReport report;
    report.family = fam;
    Rng rng(opts.seed);
    const auto& s = fam.curves.front().params;

    auto distances = [&]() {
        double c0 = 0.0, c1 = 0.0;
        for (std::size_t i = 0; i < fam.curves.size(); ++i) {
            const auto t_new = curve_tangents(report.family.curves[i]);
            const auto t_old = curve_tangents(fam.curves[i]);
            for (std::size_t j = 0; j < s.size(); ++j) {
                c0 = std::max(c0, (report.family.curves[i].points[j] - fam.curves[i].points[j]).norm());
                c1 = std::max(c1, (t_new[j] - t_old[j]).norm());
            }
        }
        return std::pair<double, double>(c0, c1);
    };

    double amp = 0.02 * delta;
    for (int round = 0; round < opts.max_rounds; ++round) {
        const auto g = tangency_indicator(report.family, m, opts.tol_angle);
        const auto cells = offending_cells(g, s, opts);
        if (cells.empty()) {
            report.rounds = round;
            for (auto& c : report.family.curves)
                if (c.has_framing()) {
                    const auto tg = curve_tangents(c);
                    for (std::size_t j = 0; j < tg.size(); ++j)
                        c.framing[j] = tg[j] * (1.0 / tg[j].norm());
                }
            for (std::size_t i = 0; i < report.family.curves.size(); ++i) {
                const TangencyLocus locus = tangency_locus(report.family.curves[i], m, opts.tol_angle);
                if (locus.cls == TangencyClass::EverywhereTangent)
                    fail("BudgetExceeded", "perturbation made a member everywhere tangent");
            }
            auto [c0, c1] = distances();
            report.c0_distance = c0;
            report.c1_distance = c1;
            return report;
        }
        // bump every member row touched by an offending cell, seeded placement
        std::vector<bool> touched(report.family.curves.size(), false);
        for (const Cell& cell : cells) {
            const std::size_t i = cell.i;
            if (touched[i]) continue;
            touched[i] = true;
            const double width = 0.1;
            // keep the bump crest off the cell so its slope acts there
            const double off = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.015, 0.05);
            const double center = std::clamp(s[cell.j] + off, 0.05, 0.95);
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            apply_t_bump(report.family.curves[i], m, center, width, sign * amp);
        }
        amp = std::min(amp * 1.35, 0.06 * delta);
        auto [c0, c1] = distances();
        if (c0 > delta || c1 > delta)
            fail("BudgetExceeded", "transversality not reached within the C0/C1 budget");
    }
    fail("BudgetExceeded", "round cap reached before the zero set became transverse");
}

// ---------------------------------------------------------------------------
// Transverse maps: quotient-rank residual
// ---------------------------------------------------------------------------

double transverse_residual(const GridMap& surface, const EngelModel& m) {
    const std::size_t d = surface.axis_params.size();
    if (d < 2) fail("SubcriticalDomain", "TM/D is 2-dimensional; need a domain of dimension >= 2");
    if (d > 3) fail("IoFailure", "domains of dimension > 3 are not supported");
    std::array<std::size_t, 3> n{1, 1, 1};
    for (std::size_t a = 0; a < d; ++a) {
        n[a] = surface.axis_params[a].size();
        if (n[a] < 3) fail("IoFailure", "each axis needs at least 3 samples");
    }
    if (surface.points.size() != n[0] * n[1] * n[2])
        fail("IoFailure", "grid point count does not match axis sizes");

    auto at = [&](std::size_t i0, std::size_t i1, std::size_t i2) -> const Point4& {
        return surface.points[(i0 * n[1] + i1) * n[2] + i2];
    };

    double worst = 1e300;
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (idx[0] = 1; idx[0] + 1 < n[0]; ++idx[0])
        for (idx[1] = 1; idx[1] + 1 < n[1]; ++idx[1])
            for (idx[2] = (d == 3 ? 1 : 0); idx[2] + 1 < (d == 3 ? n[2] : 2); ++idx[2]) {
                const Point4& p = at(idx[0], idx[1], idx[2]);
                // orthonormal completion of the frame gives quotient coordinates
                Frame fr = m.frame_at(p);
                Vec4 e1 = fr.v1 * (1.0 / fr.v1.norm());
                Vec4 e2 = fr.v2 - e1 * dot(fr.v2, e1);
                e2 = e2 * (1.0 / e2.norm());
                std::vector<Vec4> comp;
                const Vec4 basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
                while (comp.size() < 2) {
                    double best = -1.0;
                    Vec4 bestv;
                    for (const Vec4& b : basis) {
                        Vec4 r = b - e1 * dot(b, e1) - e2 * dot(b, e2);
                        for (const Vec4& q : comp) r = r - q * dot(r, q);
                        if (r.norm() > best) {
                            best = r.norm();
                            bestv = r;
                        }
                    }
                    comp.push_back(bestv * (1.0 / bestv.norm()));
                }

                std::vector<std::vector<double>> quotient_cols;
                for (std::size_t a = 0; a < d; ++a) {
                    auto im = idx, ip = idx;
                    im[a] -= 1;
                    ip[a] += 1;
                    const double h = surface.axis_params[a][idx[a] + 1] -
                                     surface.axis_params[a][idx[a] - 1];
                    const Vec4 df = (at(ip[0], ip[1], ip[2]) - at(im[0], im[1], im[2])) * (1.0 / h);
                    quotient_cols.push_back({dot(df, comp[0]), dot(df, comp[1])});
                }
                const auto sv = singular_values(quotient_cols);
                worst = std::min(worst, sv[std::min<std::size_t>(1, sv.size() - 1)]);
            }
    return worst;
}

}  // namespace engel
