#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "engel/contact.hpp"
#include "engel/core.hpp"

namespace engel {

/// Spanning pair for the 2-distribution at a point.
struct Frame {
    Vec4 v1;
    Vec4 v2;
};

/// Coframe 1-forms stored as coefficient covectors against (dx, dy, dz, dt);
/// evaluation on a tangent vector is the dot product.
struct CoframePair {
    Vec4 alpha;
    Vec4 beta;
};

inline double eval_form(const Vec4& form, const Vec4& v) { return dot(form, v); }

/// Ranks of D, [D,D], and [[D,D],[D,D]] with the prior spans included,
/// plus the singular-value diagnostics the rank decisions were made from.
struct GrowthVector {
    std::array<int, 3> ranks{0, 0, 0};
    std::array<std::vector<double>, 3> sigma;   // singular values per stage, descending
    std::array<double, 3> threshold{0, 0, 0};   // 1e-6 * sigma_max per stage
    /// Smallest kept singular value divided by its stage threshold (>= 10 when unambiguous).
    double min_gap = 0.0;
};

/// Turning function for mapping-torus models. Registry ids:
///   "linear": f = coeffs[0] * t
///   "poly":   f = sum coeffs[k] * t^(k+1)   (so f(.,0) = 0 holds by construction)
///   "custom": arbitrary callable, not serializable
struct TurningFn {
    std::string id = "linear";
    std::vector<double> coeffs{kPi};
    std::function<double(const Point4&)> fn;  // only for id == "custom"

    double operator()(const Point4& p) const;

    static TurningFn linear(double omega) { return {"linear", {omega}, nullptr}; }
    static TurningFn poly(std::vector<double> coeffs) { return {"poly", std::move(coeffs), nullptr}; }
    static TurningFn custom(std::function<double(const Point4&)> f) { return {"custom", {}, std::move(f)}; }
};

enum class ModelKind { Darboux, Lorentzian, CartanD0, MappingTorus };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// One of the coordinate Engel models. All data is value-semantic and
/// immutable after construction; safe to share across threads.
class EngelModel {
public:
    static EngelModel darboux();
    static EngelModel lorentzian();
    static EngelModel cartan_d0();
    static EngelModel mapping_torus(TurningFn f, Contactomorphism3 return_map);

    ModelKind kind() const { return kind_; }
    const TurningFn& turning() const { return turning_; }
    const Contactomorphism3& return_map() const { return return_map_; }

    Frame frame_at(const Point4& p) const;
    CoframePair coframe_at(const Point4& p) const;
    Vec4 kernel_at(const Point4& p) const;

    /// The frame vector spanning D together with the kernel (rotation numbers
    /// are windings against the ordered pair (kernel, complement)).
    Vec4 complement_at(const Point4& p) const;

    /// Angle of the projectivized Legendrian direction of D in the transverse
    /// contact slice, continuous along kernel orbits; its increments mod pi
    /// are what the developing-map turn count integrates.
    double developing_angle_at(const Point4& p) const;

    /// Mapping-torus turning value along the curve; pi*t is the smallest
    /// (one projective turn) convention used by the built-ins.
    bool has_global_frame() const { return true; }

private:
    explicit EngelModel(ModelKind k) : kind_(k) {}
    ModelKind kind_;
    TurningFn turning_;
    Contactomorphism3 return_map_ = Contactomorphism3::identity();
};

using FrameField = std::function<Frame(const Point4&)>;

/// Spanning frame of D at p; checked against the coframe to 1e-12.
Frame eval_frame(const EngelModel& model, const Point4& p);

/// Lie bracket of two frame-vector fields by central finite differences of
/// their coefficient functions with step h.
Vec4 bracket_fd(const FrameField& field, int i, int j, const Point4& p, double h);
Vec4 bracket_fd(const std::function<Vec4(const Point4&)>& X,
                const std::function<Vec4(const Point4&)>& Y, const Point4& p, double h);

GrowthVector growth_vector(const FrameField& field, const Point4& p, double h);
GrowthVector growth_vector(const EngelModel& model, const Point4& p, double h = 1e-4);

/// Kernel-straightening change of coordinates Psi(x,y,z,t) = (x, y+tx, z+t^2x, t):
/// pushes the straightened-prolongation frame onto the Lorentzian model.
Point4 cartan_change_of_coordinates(const Point4& p);

/// Closed-form Jacobian of Psi at p, row-major 4x4 against (x, y, z, t).
std::array<double, 16> cartan_change_jacobian(const Point4& p);

struct TurningCheck {
    double min_dt_f = 0.0;
    Point4 argmin;
    bool positive = false;
};

/// Spot-check dt f > 0 on a seeded grid inside the box [lo, hi]
/// (default resolution 32x32x32 in space, 64 in t).
TurningCheck check_turning_positive(const EngelModel& model, const Point4& lo, const Point4& hi,
                                    std::uint64_t seed, std::array<int, 4> dims = {32, 32, 32, 64});

}  // namespace engel
