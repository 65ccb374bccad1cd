#include "engel/contact.hpp"

#include <cmath>

namespace engel {

std::array<double, 9> Contactomorphism3::jacobian(const Vec3& q) const {
    if (jac_) return jac_(q);
    std::array<double, 9> J{};
    for (int j = 0; j < 3; ++j) {
        Vec3 qp = q, qm = q;
        qp[j] += fd_step;
        qm[j] -= fd_step;
        const Vec3 vp = map_(qp), vm = map_(qm);
        for (int i = 0; i < 3; ++i) J[i * 3 + j] = (vp[i] - vm[i]) / (2.0 * fd_step);
    }
    return J;
}

Contactomorphism3 Contactomorphism3::identity() {
    return Contactomorphism3("identity", {}, [](const Vec3& q) { return q; },
                             [](const Vec3&) {
                                 return std::array<double, 9>{1, 0, 0, 0, 1, 0, 0, 0, 1};
                             });
}

Contactomorphism3 Contactomorphism3::linear_lift(double a, double b, double c, double d) {
    const double det = a * d - b * c;
    auto map = [a, b, c, d, det](const Vec3& q) {
        const double Q = 0.5 * a * c * q.x * q.x + b * c * q.x * q.z + 0.5 * b * d * q.z * q.z;
        return Vec3{a * q.x + b * q.z, det * q.y + Q, c * q.x + d * q.z};
    };
    auto jac = [a, b, c, d, det](const Vec3& q) {
        return std::array<double, 9>{a, 0, b,
                                     a * c * q.x + b * c * q.z, det, b * c * q.x + b * d * q.z,
                                     c, 0, d};
    };
    return Contactomorphism3("linear_lift", {a, b, c, d}, map, jac);
}

Contactomorphism3 Contactomorphism3::half_scaling() {
    auto m = linear_lift(1.0, 0.0, 0.0, 0.5);
    return Contactomorphism3("half_scaling", {}, [m](const Vec3& q) { return m(q); },
                             [m](const Vec3& q) { return m.jacobian(q); });
}

Contactomorphism3 Contactomorphism3::rotation_lift(double alpha) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    auto m = linear_lift(ca, sa, -sa, ca);
    return Contactomorphism3("rotation_lift", {alpha}, [m](const Vec3& q) { return m(q); },
                             [m](const Vec3& q) { return m.jacobian(q); });
}

Contactomorphism3 Contactomorphism3::from_registry(const std::string& id,
                                                   const std::vector<double>& params) {
    if (id == "identity") return identity();
    if (id == "half_scaling") return half_scaling();
    if (id == "rotation_lift") {
        if (params.size() != 1) fail("IoFailure", "rotation_lift expects 1 parameter");
        return rotation_lift(params[0]);
    }
    if (id == "linear_lift") {
        if (params.size() != 4) fail("IoFailure", "linear_lift expects 4 parameters");
        return linear_lift(params[0], params[1], params[2], params[3]);
    }
    fail("IoFailure", "unknown contactomorphism id '" + id + "'");
}

Contactomorphism3 Contactomorphism3::compose(const Contactomorphism3& outer,
                                             const Contactomorphism3& inner) {
    auto map = [outer, inner](const Vec3& q) { return outer(inner(q)); };
    auto jac = [outer, inner](const Vec3& q) {
        const auto Ji = inner.jacobian(q);
        const auto Jo = outer.jacobian(inner(q));
        std::array<double, 9> J{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) J[i * 3 + j] += Jo[i * 3 + k] * Ji[k * 3 + j];
        return J;
    };
    return Contactomorphism3("composite", {}, map, jac);
}

double contact_conformal_factor(const Contactomorphism3& phi, const Vec3& q, double tol) {
    const Vec3 img = phi(q);
    if (!q.finite() || !img.finite()) fail("NonFinitePoint", "conformal factor evaluation");
    const auto J = phi.jacobian(q);
    // alpha0 at the image: coefficients (-Z, 1, 0) against (dx, dy, dz)
    const double c0 = -img.z, c1 = 1.0, c2 = 0.0;
    double p[3];
    for (int j = 0; j < 3; ++j) p[j] = c0 * J[0 * 3 + j] + c1 * J[1 * 3 + j] + c2 * J[2 * 3 + j];
    const double lambda = p[1];  // alpha0 at q has dy-coefficient 1
    const double residual = std::abs(p[0] - lambda * (-q.z)) + std::abs(p[2]);
    const double scale = std::max({1.0, std::abs(lambda), std::abs(p[0]), std::abs(p[2])});
    if (residual > tol * scale)
        fail("NotContact", "pullback of dy - z dx has transverse component " +
                               std::to_string(residual) + " at the query point");
    return lambda;
}

}  // namespace engel
