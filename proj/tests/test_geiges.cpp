#include "doctest.h"

#include <cmath>

#include "engel/geiges.hpp"
#include "engel/numerics.hpp"
#include "engel/samples.hpp"

using namespace engel;

namespace {

LegendrianCurve unit_square_front(bool counterclockwise) {
    // piecewise-linear closed front traversing the unit square; t carries the
    // nominal slope of each side (the square is a front-level test object, not
    // a Legendrian-residual one)
    const int per_side = 64;
    LegendrianCurve l;
    l.closed = true;
    const Vec2 ccw[5] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
    for (int side = 0; side < 4; ++side) {
        for (int i = 0; i < per_side; ++i) {
            const double u = double(i) / per_side;
            Vec2 a = ccw[side], b = ccw[side + 1];
            if (!counterclockwise) {
                a = ccw[4 - side];
                b = ccw[3 - side];
            }
            l.params.push_back((side + u) / 4.0);
            l.x.push_back(a.x + (b.x - a.x) * u);
            l.z.push_back(a.z + (b.z - a.z) * u);
            l.t.push_back(0.0);
        }
    }
    l.params.push_back(1.0);
    l.x.push_back(l.x.front());
    l.z.push_back(l.z.front());
    l.t.push_back(0.0);
    return l;
}

}  // namespace

TEST_CASE("projection drops y and keeps the Legendrian invariant") {
    const auto seg = samples::axis_segment(0, 0.0, 1.0, 64);
    const auto l = geiges_project(seg);
    CHECK(l.size() == 64);
    for (std::size_t i = 0; i < l.size(); ++i) {
        CHECK(l.z[i] == 0.0);
        CHECK(l.t[i] == 0.0);
    }

    const auto jet = samples::jet_curve({0, 0, 0, 1}, 0.0, 1.0, 2048);  // y = x^3
    const auto lj = geiges_project(jet);
    CHECK(legendrian_residual(lj) < 1e-8);
    for (std::size_t i = 0; i < lj.size(); i += 512) {
        const double s = jet.points[i].x;
        CHECK(lj.z[i] == doctest::Approx(3 * s * s).epsilon(1e-14));
        CHECK(lj.t[i] == doctest::Approx(6 * s).epsilon(1e-14));
    }
}

TEST_CASE("projection rejects non-horizontal input") {
    auto bad = samples::axis_segment(1, 0.0, 1.0, 64);  // moves along y only
    CHECK_THROWS_WITH_AS(geiges_project(bad), doctest::Contains("NotHorizontal"), Error);
}

TEST_CASE("lift: exact antiderivative oracle for the jet curve") {
    const auto jet = samples::jet_curve({0, 0, 0, 1}, 0.0, 1.0, 2048);
    const auto l = geiges_project(jet);
    const auto back = geiges_lift(l, 0.0);
    // y(1) = integral of 3 s^2 = 1 up to quadrature error O(h^2)
    CHECK(back.points.back().y == doctest::Approx(1.0).epsilon(1e-6));
    // project(lift(l)) returns (x, z, t) bit-exactly
    const auto l2 = geiges_project(back);
    for (std::size_t i = 0; i < l.size(); ++i) {
        CHECK(l2.x[i] == l.x[i]);
        CHECK(l2.z[i] == l.z[i]);
        CHECK(l2.t[i] == l.t[i]);
    }

    LegendrianCurve flat;
    flat.params = linspace(0.0, 1.0, 64);
    flat.x = flat.params;
    flat.z.assign(64, 0.0);
    flat.t.assign(64, 0.0);
    const auto lifted = geiges_lift(flat, 0.0);
    for (const auto& p : lifted.points) CHECK(p.y == 0.0);
}

TEST_CASE("lift rejects non-Legendrian data") {
    LegendrianCurve bad;
    bad.params = linspace(0.0, 1.0, 64);
    bad.x = bad.params;
    bad.z = bad.params;          // z' = 1
    bad.t.assign(64, 0.0);       // but t = 0
    CHECK_THROWS_WITH_AS(geiges_lift(bad, 0.0), doctest::Contains("NotLegendrian"), Error);
}

TEST_CASE("front signed area: square orientation convention") {
    CHECK(front_signed_area(unit_square_front(true)) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(front_signed_area(unit_square_front(false)) == doctest::Approx(1.0).epsilon(1e-12));

    LegendrianCurve open_curve;
    open_curve.params = linspace(0.0, 1.0, 16);
    open_curve.x = open_curve.params;
    open_curve.z.assign(16, 0.0);
    open_curve.t.assign(16, 0.0);
    CHECK_THROWS_WITH_AS(front_signed_area(open_curve), doctest::Contains("NotClosed"), Error);
}

TEST_CASE("roundtrip on seeded loops is bit-exact on the projection") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int rot = int(seed % 3) - 1;
        const auto c = samples::standard_loop(rot, 2048, seed, 0.05, 0.3);
        const auto l = geiges_project(c);
        const auto back = geiges_lift(l, c.points.front().y);
        REQUIRE(back.size() == c.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i)
            worst = std::max(worst, (back.points[i] - c.points[i]).norm());
        CHECK(worst < 1e-9);
        CHECK(back.closed);
    }
}

TEST_CASE("lift closure defect equals the signed area") {
    // loop with deliberately nonzero front area: shift z by a bump
    auto c = samples::standard_loop(1, 2048, 4, 0.05);
    auto l = geiges_project(c);
    for (std::size_t i = 0; i < l.size(); ++i) {
        const double s = l.params[i];
        const double w = std::sin(kPi * s);
        l.z[i] += 0.05 * w * w * std::sin(2.0 * kPi * s);  // periodic, keeps closure
        // restore the Legendrian relation by re-deriving t from the new z
    }
    // rebuild t so the curve stays Legendrian at grid resolution
    {
        const auto dz = fd_derivative(l.params, l.z, true);
        const auto dx = fd_derivative(l.params, l.x, true);
        bool ok = true;
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (std::abs(dx[i]) < 1e-6) { ok = false; break; }
        }
        if (ok)
            for (std::size_t i = 0; i < l.size(); ++i) l.t[i] = dz[i] / dx[i];
    }
    if (legendrian_residual(l) < 1e-6) {
        const double area = front_signed_area(l);
        const auto lifted = geiges_lift(l, 0.0);
        const double defect = lifted.points.back().y - lifted.points.front().y;
        CHECK(defect == doctest::Approx(area).epsilon(1e-12));
        CHECK(lifted.closed == (std::abs(area) < 1e-10));
    }
}

TEST_CASE("Legendrian residual of the projection is controlled by horizontality") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto c = samples::standard_loop(1, 2048, seed, 0.05);
        const double hres = horizontality_residual(c, EngelModel::darboux());
        const auto l = geiges_project(c);
        const double lres = legendrian_residual(l);
        CHECK(lres <= 2.0 * hres + 1e-15);
    }
}
