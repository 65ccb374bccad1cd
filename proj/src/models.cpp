#include "engel/models.hpp"

#include <cmath>

#include "engel/numerics.hpp"

namespace engel {

double TurningFn::operator()(const Point4& p) const {
    if (id == "linear") return coeffs.at(0) * p.t;
    if (id == "poly") {
        double acc = 0.0, tp = p.t;
        for (double c : coeffs) {
            acc += c * tp;
            tp *= p.t;
        }
        return acc;
    }
    if (id == "custom") return fn(p);
    fail("IoFailure", "unknown turning-function id '" + id + "'");
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Darboux: return "darboux";
        case ModelKind::Lorentzian: return "lorentzian";
        case ModelKind::CartanD0: return "cartan_d0";
        case ModelKind::MappingTorus: return "mapping_torus";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "darboux") return ModelKind::Darboux;
    if (s == "lorentzian") return ModelKind::Lorentzian;
    if (s == "cartan_d0") return ModelKind::CartanD0;
    if (s == "mapping_torus") return ModelKind::MappingTorus;
    fail("IoFailure", "unknown model kind '" + s + "'");
}

EngelModel EngelModel::darboux() { return EngelModel(ModelKind::Darboux); }
EngelModel EngelModel::lorentzian() { return EngelModel(ModelKind::Lorentzian); }
EngelModel EngelModel::cartan_d0() { return EngelModel(ModelKind::CartanD0); }

EngelModel EngelModel::mapping_torus(TurningFn f, Contactomorphism3 return_map) {
    EngelModel m(ModelKind::MappingTorus);
    m.turning_ = std::move(f);
    m.return_map_ = std::move(return_map);
    return m;
}

Frame EngelModel::frame_at(const Point4& p) const {
    switch (kind_) {
        case ModelKind::Darboux:
            return {{0, 0, 0, 1}, {1, p.z, p.t, 0}};
        case ModelKind::Lorentzian:
            return {{0, 0, 0, 1}, {1, p.t, p.t * p.t, 0}};
        case ModelKind::CartanD0:
            return {{1, 0, 0, 0}, {0, -p.x, -2.0 * p.t * p.x, 1}};
        case ModelKind::MappingTorus: {
            const double f = turning_(p);
            const double cf = std::cos(f), sf = std::sin(f);
            // L = cos(f) (dx + z dy direction) + sin(f) dz direction
            return {{0, 0, 0, 1}, {cf, p.z * cf, sf, 0}};
        }
    }
    fail("IoFailure", "bad model kind");
}

CoframePair EngelModel::coframe_at(const Point4& p) const {
    switch (kind_) {
        case ModelKind::Darboux:
            return {{-p.z, 1, 0, 0}, {-p.t, 0, 1, 0}};
        case ModelKind::Lorentzian:
            return {{-p.t, 1, 0, 0}, {-p.t * p.t, 0, 1, 0}};
        case ModelKind::CartanD0:
            return {{0, 1, 0, p.x}, {0, 0, 1, 2.0 * p.t * p.x}};
        case ModelKind::MappingTorus: {
            const double f = turning_(p);
            return {{-p.z, 1, 0, 0}, {-std::sin(f), 0, std::cos(f), 0}};
        }
    }
    fail("IoFailure", "bad model kind");
}

Vec4 EngelModel::kernel_at(const Point4& p) const {
    switch (kind_) {
        case ModelKind::Darboux: return {0, 0, 0, 1};
        case ModelKind::Lorentzian: return {1, p.t, p.t * p.t, 0};
        case ModelKind::CartanD0: return {1, 0, 0, 0};
        case ModelKind::MappingTorus: return {0, 0, 0, 1};
    }
    fail("IoFailure", "bad model kind");
}

Vec4 EngelModel::complement_at(const Point4& p) const {
    const Frame fr = frame_at(p);
    return kind_ == ModelKind::Lorentzian ? fr.v1 : fr.v2;
}

double EngelModel::developing_angle_at(const Point4& p) const {
    switch (kind_) {
        case ModelKind::Darboux:
            // Legendrian direction (1, z, t) has slice-framing coordinates (1, t)
            return std::atan2(p.t, 1.0);
        case ModelKind::Lorentzian:
        case ModelKind::CartanD0:
            // conjugate to a prolongation with the infinity slice removed
            return std::atan2(-p.x, 1.0);
        case ModelKind::MappingTorus:
            return turning_(p);
    }
    fail("IoFailure", "bad model kind");
}

Frame eval_frame(const EngelModel& model, const Point4& p) {
    require_finite(p, "frame evaluation point");
    if (model.kind() == ModelKind::MappingTorus && (p.t < 0.0 || p.t > 1.0))
        fail("IoFailure", "mapping-torus frame evaluation needs t in [0, 1]");
    const Frame fr = model.frame_at(p);
    const CoframePair cf = model.coframe_at(p);
    const double residual = std::abs(eval_form(cf.alpha, fr.v1)) + std::abs(eval_form(cf.beta, fr.v1)) +
                            std::abs(eval_form(cf.alpha, fr.v2)) + std::abs(eval_form(cf.beta, fr.v2));
    if (residual > 1e-12)
        fail("NoConvergence", "frame/coframe duality residual " + std::to_string(residual));
    return fr;
}

static std::array<Vec4, 4> field_jacobian(const std::function<Vec4(const Point4&)>& X,
                                          const Point4& p, double h) {
    std::array<Vec4, 4> cols;  // dX/dx, dX/dy, dX/dz, dX/dt
    for (int j = 0; j < 4; ++j) {
        Point4 pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        cols[j] = (X(pp) - X(pm)) * (1.0 / (2.0 * h));
    }
    return cols;
}

static Vec4 apply_jac(const std::array<Vec4, 4>& J, const Vec4& v) {
    return J[0] * v.x + J[1] * v.y + J[2] * v.z + J[3] * v.t;
}

Vec4 bracket_fd(const std::function<Vec4(const Point4&)>& X,
                const std::function<Vec4(const Point4&)>& Y, const Point4& p, double h) {
    const auto JX = field_jacobian(X, p, h);
    const auto JY = field_jacobian(Y, p, h);
    return apply_jac(JY, X(p)) - apply_jac(JX, Y(p));
}

Vec4 bracket_fd(const FrameField& field, int i, int j, const Point4& p, double h) {
    auto pick = [&field](int k) {
        return [&field, k](const Point4& q) { return k == 0 ? field(q).v1 : field(q).v2; };
    };
    return bracket_fd(pick(i), pick(j), p, h);
}

namespace {

int rank_with_deadband(const std::vector<std::vector<double>>& cols, std::vector<double>& sv_out,
                       double& thr_out, double& min_gap) {
    sv_out = singular_values(cols);
    const double smax = sv_out.empty() ? 0.0 : sv_out.front();
    const double thr = 1e-6 * smax;
    thr_out = thr;
    int rank = 0;
    for (double s : sv_out) {
        if (s >= 10.0 * thr && s > 0.0) {
            ++rank;
            min_gap = std::min(min_gap, s / thr);
        } else if (s > thr) {
            fail("RankAmbiguous", "singular value " + std::to_string(s) +
                                      " lies in the dead band (" + std::to_string(thr) + ", " +
                                      std::to_string(10.0 * thr) + "); try a different step h");
        }
    }
    return rank;
}

std::vector<double> as_col(const Vec4& v) { return {v.x, v.y, v.z, v.t}; }

}  // namespace

GrowthVector growth_vector(const FrameField& field, const Point4& p, double h) {
    require_finite(p, "growth vector base point");
    if (!(h > 0.0) || h > 1e-2) fail("IoFailure", "step size h must lie in (0, 1e-2]");

    const Frame fr = field(p);
    const Vec4 b12 = bracket_fd(field, 0, 1, p, h);

    auto b12_field = [&field, h](const Point4& q) { return bracket_fd(field, 0, 1, q, h); };
    auto v1_field = [&field](const Point4& q) { return field(q).v1; };
    auto v2_field = [&field](const Point4& q) { return field(q).v2; };
    const Vec4 b1_12 = bracket_fd(v1_field, b12_field, p, h);
    const Vec4 b2_12 = bracket_fd(v2_field, b12_field, p, h);

    GrowthVector gv;
    gv.min_gap = 1e300;
    std::vector<std::vector<double>> cols = {as_col(fr.v1), as_col(fr.v2)};
    gv.ranks[0] = rank_with_deadband(cols, gv.sigma[0], gv.threshold[0], gv.min_gap);
    cols.push_back(as_col(b12));
    gv.ranks[1] = rank_with_deadband(cols, gv.sigma[1], gv.threshold[1], gv.min_gap);
    cols.push_back(as_col(b1_12));
    cols.push_back(as_col(b2_12));
    gv.ranks[2] = rank_with_deadband(cols, gv.sigma[2], gv.threshold[2], gv.min_gap);
    return gv;
}

GrowthVector growth_vector(const EngelModel& model, const Point4& p, double h) {
    return growth_vector([&model](const Point4& q) { return model.frame_at(q); }, p, h);
}

Point4 cartan_change_of_coordinates(const Point4& p) {
    require_finite(p, "coordinate-change argument");
    return {p.x, p.y + p.t * p.x, p.z + p.t * p.t * p.x, p.t};
}

std::array<double, 16> cartan_change_jacobian(const Point4& p) {
    return {1, 0, 0, 0,
            p.t, 1, 0, p.x,
            p.t * p.t, 0, 1, 2.0 * p.t * p.x,
            0, 0, 0, 1};
}

TurningCheck check_turning_positive(const EngelModel& model, const Point4& lo, const Point4& hi,
                                    std::uint64_t seed, std::array<int, 4> dims) {
    if (model.kind() != ModelKind::MappingTorus)
        fail("IoFailure", "turning check only applies to mapping-torus models");
    Rng rng(seed);
    TurningCheck out;
    out.min_dt_f = 1e300;
    const double ht = 1e-6;
    for (int a = 0; a < dims[0]; ++a)
        for (int b = 0; b < dims[1]; ++b)
            for (int c = 0; c < dims[2]; ++c)
                for (int d = 0; d < dims[3]; ++d) {
                    Point4 p{lo.x + (hi.x - lo.x) * (a + rng.uniform()) / dims[0],
                             lo.y + (hi.y - lo.y) * (b + rng.uniform()) / dims[1],
                             lo.z + (hi.z - lo.z) * (c + rng.uniform()) / dims[2],
                             lo.t + (hi.t - lo.t) * (d + rng.uniform()) / dims[3]};
                    Point4 pp = p, pm = p;
                    pp.t += ht;
                    pm.t -= ht;
                    const double dtf = (model.turning()(pp) - model.turning()(pm)) / (2.0 * ht);
                    if (dtf < out.min_dt_f) {
                        out.min_dt_f = dtf;
                        out.argmin = p;
                    }
                }
    out.positive = out.min_dt_f > 0.0;
    return out;
}

}  // namespace engel
