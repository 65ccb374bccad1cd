#include "doctest.h"

#include <cmath>

#include "engel/numerics.hpp"
#include "engel/rigidity.hpp"
#include "engel/samples.hpp"

using namespace engel;
using namespace engel::rigidity;

TEST_CASE("lemma2: equal endpoints force the zero deformation from every start") {
    const auto rep = lemma2_search(0.0, 0.0, 0.0, 1.0, 20, 17);
    REQUIRE(rep.starts.size() == 20);
    for (const auto& st : rep.starts) {
        CHECK(st.converged);
        CHECK(st.max_abs_t < 1e-7);
    }
    // discrete sum-of-squares oracle: positive weights force t = 0
    const auto& t = rep.starts[std::size_t(rep.best)].t;
    std::vector<double> sq(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) sq[i] = t[i] * t[i];
    CHECK(trapz(rep.x_grid, sq) < 1e-15);
}

TEST_CASE("lemma2: z1 > z0 is feasible; the constant profile is one witness") {
    const auto rep = lemma2_search(0.0, 0.5, 0.0, 1.0, 8, 3);
    const auto& best = rep.starts[std::size_t(rep.best)];
    CHECK(best.converged);
    std::vector<double> sq(best.t.size());
    for (std::size_t i = 0; i < best.t.size(); ++i) sq[i] = best.t[i] * best.t[i];
    CHECK(trapz(rep.x_grid, sq) == doctest::Approx(0.5).epsilon(1e-10));
    // closed-form check: t = sqrt(0.5) works
    std::vector<double> flat(best.t.size(), 0.5);
    CHECK(trapz(rep.x_grid, flat) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("lemma2: z1 < z0 is infeasible") {
    CHECK_THROWS_WITH_AS(lemma2_search(0.0, -0.1, 0.0, 1.0, 4, 1),
                         doctest::Contains("Infeasible"), Error);
}

TEST_CASE("example 4: closure algebra and residuals") {
    for (double A : {1e-4, 0.01, 0.3}) {
        const auto d = build_example4(A);
        CHECK(d.closure_defect < 1e-8);
        CHECK(d.angle_residual < 1e-6);
        CHECK(d.y_residual < 1e-6);
        CHECK(d.curve.points.front().y == doctest::Approx(A).epsilon(1e-12));
        CHECK(d.curve.points.back().y == doctest::Approx(2.0 * A).epsilon(1e-12));
        const double hres = horizontality_residual(
            d.curve, EngelModel::mapping_torus(TurningFn::linear(kPi),
                                               Contactomorphism3::half_scaling()));
        CHECK(hres < 1e-6);
    }
}

TEST_CASE("example 4: A = 0 degenerates to the kernel orbit") {
    const auto d = build_example4(0.0);
    CHECK(d.closure_defect == 0.0);
    for (const auto& p : d.curve.points) {
        CHECK(p.x == 0.0);
        CHECK(p.z == 0.0);
    }
}

TEST_CASE("example 4: front diameter scales like sqrt(A)") {
    auto diameter = [](const TorusDeformation& d) {
        double lo = 1e300, hi = -1e300;
        for (const auto& p : d.curve.points) {
            lo = std::min(lo, p.x);
            hi = std::max(hi, p.x);
        }
        return hi - lo;
    };
    const double d1 = diameter(build_example4(1e-6, 8192));
    const double d2 = diameter(build_example4(4e-6, 8192));
    CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("example 4 deformation is not everywhere tangent to the kernel") {
    const auto torus = EngelModel::mapping_torus(TurningFn::linear(kPi),
                                                 Contactomorphism3::half_scaling());
    const auto d = build_example4(0.05, 8192);
    CHECK(tangency_locus(d.curve, torus).cls != TangencyClass::EverywhereTangent);
}

TEST_CASE("example 5: pinned half-pi case and identity across seeds") {
    const auto r0 = build_example5(0.5 * kPi, 1.0);
    CHECK(r0.p0.x == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(r0.p0.z == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
    CHECK(r0.p1.x == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(r0.p1.z == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(r0.closed_form == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r0.polyline_integral == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(r0.closed_form - r0.polyline_integral) < 1e-12);
    CHECK(r0.deformation.closure_defect < 1e-8);

    Rng rng(23);
    for (int i = 0; i < 40; ++i) {
        const double alpha = rng.uniform(0.05, kPi - 0.05);
        const double r = rng.uniform(0.1, 2.0);
        const auto res = build_example5(alpha, r, 8192);
        CHECK(std::abs(res.closed_form - res.polyline_integral) <
              1e-12 * std::max(1.0, std::abs(res.closed_form)));
    }
}

TEST_CASE("example 5 rejects angles outside (0, pi)") {
    CHECK_THROWS_WITH_AS(build_example5(kPi, 1.0), doctest::Contains("BadAngle"), Error);
    CHECK_THROWS_WITH_AS(build_example5(0.0, 1.0), doctest::Contains("BadAngle"), Error);
}

TEST_CASE("prop7_deform: dilating maps admit deformations, strict maps do not") {
    // (x, y, z) -> (2x, 4y, 2z) has conformal factor 4
    const auto phi = Contactomorphism3::linear_lift(2.0, 0.0, 0.0, 2.0);
    const auto d = prop7_deform(phi, 8192);
    CHECK(d.closure_defect < 1e-8);
    CHECK(d.angle_residual < 1e-6);
    // required area is -3 y(1), so y(1) < 0
    CHECK(d.curve.points.back().y < 0.0);
    CHECK(d.curve.points.back().y == doctest::Approx(0.1 / (1.0 - 4.0)).epsilon(1e-10));

    // the half-scaling map reduces to the Example-4 behaviour (c = 1/2)
    const auto d2 = prop7_deform(Contactomorphism3::half_scaling(), 8192);
    CHECK(d2.closure_defect < 1e-8);
    CHECK(d2.curve.points.back().y == doctest::Approx(0.1 / (1.0 - 0.5)).epsilon(1e-10));

    CHECK_THROWS_WITH_AS(prop7_deform(Contactomorphism3::identity()),
                         doctest::Contains("StrictConformal"), Error);
    CHECK_THROWS_WITH_AS(prop7_deform(Contactomorphism3::rotation_lift(0.7)),
                         doctest::Contains("StrictConformal"), Error);
}

TEST_CASE("prop7_deform output is not everywhere tangent") {
    const auto phi = Contactomorphism3::linear_lift(1.5, 0.2, 0.0, 1.1);
    const auto d = prop7_deform(phi, 8192);
    const auto torus = EngelModel::mapping_torus(TurningFn::linear(kPi), phi);
    CHECK(tangency_locus(d.curve, torus).cls != TangencyClass::EverywhereTangent);
    CHECK(d.closure_defect < 1e-8);
}

TEST_CASE("torus_reconstruct flags incompatible fronts") {
    const auto torus = EngelModel::mapping_torus(TurningFn::linear(kPi),
                                                 Contactomorphism3::identity());
    fronts::Front bad;
    bad.params = linspace(0.0, 1.0, 257);
    bad.x = bad.params;               // straight horizontal front: angle 0 everywhere
    bad.z.assign(257, 0.0);
    CHECK_THROWS_WITH_AS(torus_reconstruct(bad, torus, 0.0),
                         doctest::Contains("AngleMismatch"), Error);
}

TEST_CASE("example 4 reconstruction round-trips through torus_reconstruct") {
    const auto d = build_example4(0.2, 16384);
    const auto torus = EngelModel::mapping_torus(TurningFn::linear(kPi),
                                                 Contactomorphism3::half_scaling());
    const auto redo = torus_reconstruct(d.front, torus, 0.2);
    CHECK(redo.closure_defect < 1e-8);
    CHECK(redo.angle_residual < 1e-6);
}
