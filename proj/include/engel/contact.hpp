#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "engel/core.hpp"

namespace engel {

/// Self-map of (x, y, z)-space with contact verification data against the
/// standard form dy - z dx. Derivatives come from a registered closed form
/// when available, otherwise central differences with step fd_step.
class Contactomorphism3 {
public:
    using MapFn = std::function<Vec3(const Vec3&)>;
    using JacFn = std::function<std::array<double, 9>(const Vec3&)>;  // row-major d(X,Y,Z)/d(x,y,z)

    Contactomorphism3() = default;
    Contactomorphism3(std::string id, std::vector<double> params, MapFn map, JacFn jac = nullptr)
        : id_(std::move(id)), params_(std::move(params)), map_(std::move(map)), jac_(std::move(jac)) {}

    Vec3 operator()(const Vec3& q) const { return map_(q); }

    std::array<double, 9> jacobian(const Vec3& q) const;

    const std::string& id() const { return id_; }
    const std::vector<double>& params() const { return params_; }

    static Contactomorphism3 identity();

    /// Lift of the plane map (x, z) -> (a x + b z, c x + d z) to a
    /// contactomorphism of (R^3, ker(dy - z dx)); its conformal factor is the
    /// constant a d - b c.
    static Contactomorphism3 linear_lift(double a, double b, double c, double d);

    /// Example-4 scaling (x, y, z) -> (x, y/2, z/2).
    static Contactomorphism3 half_scaling();

    /// Lift of the plane rotation by angle -alpha (the Example-5 map).
    static Contactomorphism3 rotation_lift(double alpha);

    /// Build from a registry id + params ("identity" | "linear_lift" | "half_scaling" | "rotation_lift").
    static Contactomorphism3 from_registry(const std::string& id, const std::vector<double>& params);

    static Contactomorphism3 compose(const Contactomorphism3& outer, const Contactomorphism3& inner);

    double fd_step = 1e-6;

private:
    std::string id_ = "identity";
    std::vector<double> params_;
    MapFn map_ = [](const Vec3& q) { return q; };
    JacFn jac_ = nullptr;
};

/// Proportionality factor lambda with phi^* (dy - z dx) = lambda (dy - z dx) at q.
/// Throws NotContact if the pullback has a transverse component above tol.
double contact_conformal_factor(const Contactomorphism3& phi, const Vec3& q, double tol = 1e-8);

}  // namespace engel
