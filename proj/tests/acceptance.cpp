// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "engel/homotopy.hpp"
#include "engel/io.hpp"
#include "engel/numerics.hpp"
#include "engel/rigidity.hpp"
#include "engel/samples.hpp"

using namespace engel;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

bool require(Outcome& o, bool cond, const std::string& what) {
    if (!cond) {
        o.pass = false;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += what;
    }
    return cond;
}

Point4 seeded_point(Rng& rng, double box) {
    return {rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(-box, box),
            rng.uniform(-box, box)};
}

// criterion 3 worker, reused by the determinism pass
std::string run_roundtrips(Outcome& o) {
    std::ostringstream digest;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const int rot = int(seed % 5) - 2;
        const auto c = samples::standard_loop(rot, 2048, seed * 191 + 7, 0.05, 0.1);
        const auto l = geiges_project(c);
        const auto back = geiges_lift(l, c.points.front().y);
        double worst = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i)
            worst = std::max(worst, (back.points[i] - c.points[i]).norm());
        require(o, worst < 1e-9, "roundtrip error " + std::to_string(worst));

        // closure defect equals the signed area, exercised on a sheared copy
        // with genuinely nonzero area
        LegendrianCurve shifted = l;
        for (std::size_t i = 0; i < shifted.size(); ++i) {
            const double s = shifted.params[i];
            const double w = std::sin(kPi * s);
            shifted.z[i] += 2e-4 * w * w * std::sin(2.0 * kPi * s + double(seed));
        }
        const auto dz = fd_derivative(shifted.params, shifted.z, true);
        const auto dx = fd_derivative(shifted.params, shifted.x, true);
        bool slopes_ok = true;
        for (std::size_t i = 0; i < shifted.size(); ++i) {
            if (std::abs(dx[i]) < 1e-5) {
                slopes_ok = false;
                break;
            }
        }
        if (slopes_ok) {
            for (std::size_t i = 0; i < shifted.size(); ++i) shifted.t[i] = dz[i] / dx[i];
            if (legendrian_residual(shifted) < 1e-6) {
                const double area = front_signed_area(shifted);
                const auto lifted = geiges_lift(shifted, 0.0);
                const double defect = lifted.points.back().y - lifted.points.front().y;
                require(o, std::abs(defect - area) < 1e-9,
                        "defect/area mismatch " + std::to_string(std::abs(defect - area)));
            }
        }
        digest << io::curve_to_json(back);
    }
    return digest.str();
}

std::string run_certificates(Outcome& o) {
    std::ostringstream digest;
    Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
        const int cusps = 3 + 2 * (i % 3);
        const auto f = fronts::generate_admissible_front(cusps, rng.next_u64(), 4096);
        const double area = fronts::signed_area(f);
        require(o, area > 0.0, "non-positive area at front " + std::to_string(i));
        try {
            const auto cert = fronts::positive_area_certificate(f);
            require(o, cert.total_area > 0.0, "non-positive certified area");
            int prev = cusps;
            for (const auto& step : cert.reduction_trace) {
                require(o, step.cusps_before == prev && step.cusps_after == prev - 2,
                        "cusp count did not decrease by 2");
                prev = step.cusps_after;
            }
            require(o, prev == 3, "reduction did not reach 3 cusps");
        } catch (const Error& e) {
            require(o, false, std::string("certificate failed: ") + e.what());
        }
        digest << io::front_to_json(f);
    }
    return digest.str();
}

std::string run_homotopies(Outcome& o) {
    std::ostringstream digest;
    const auto darboux = EngelModel::darboux();
    for (std::uint64_t i = 0; i < 10; ++i) {
        const int rot = int(i % 5) - 2;
        const auto [c0, c1] = samples::loop_pair(rot, 2048, 1000 + i * 37);
        const auto fam = homotopy::connect_loops(c0, c1, {.slices = 64});
        const auto check = homotopy::verify_family(fam, darboux, 1e-6, 1e-9);
        require(o, check.pass,
                "pair " + std::to_string(i) + " failed at slice " +
                    std::to_string(check.first_bad_slice) + " (residual " +
                    std::to_string(check.worst_residual) + ")");
        require(o, check.worst_residual < 1e-6, "slice residual over budget");
        require(o, check.worst_closure < 1e-9, "slice closure over budget");
        require(o, check.rotation_constant, "rotation drifted");
        for (const auto& r : fam.report)
            require(o, std::abs(r.front_area) < 1e-10, "front area not re-zeroed");
        digest << "pair " << i << " rot " << rot << " loops " << fam.r1_loops_per_slice << "\n";
        for (std::size_t k : {std::size_t(0), fam.slices.size() / 2, fam.slices.size() - 1})
            digest << io::curve_to_json(fam.slices[k]);
    }
    // rotation-mismatched pairs raise RotationMismatch
    bool threw = false;
    try {
        const auto a = samples::standard_loop(0, 1024, 5);
        const auto b = samples::standard_loop(1, 1024, 6);
        homotopy::connect_loops(a, b, {.slices = 4});
    } catch (const Error& e) {
        threw = e.token() == "RotationMismatch";
    }
    require(o, threw, "rotation mismatch not raised");
    return digest.str();
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    struct Criterion {
        int id;
        const char* name;
        std::function<void(Outcome&)> fn;
    };
    std::string digest3, digest6, digest10;

    const std::vector<Criterion> criteria = {
        {1, "Engel condition: growth vector (2,3,4) at 100 seeded points per model",
         [](Outcome& o) {
             const EngelModel models[] = {
                 EngelModel::darboux(), EngelModel::lorentzian(), EngelModel::cartan_d0(),
                 EngelModel::mapping_torus(TurningFn::linear(kPi), Contactomorphism3::identity())};
             Rng rng(41);
             for (const auto& m : models)
                 for (int i = 0; i < 100; ++i) {
                     Point4 p = seeded_point(rng, 2.0);
                     if (m.kind() == ModelKind::MappingTorus) p.t = rng.uniform(0.02, 0.98);
                     const auto gv = growth_vector(m, p, 1e-4);
                     require(o, gv.ranks[0] == 2 && gv.ranks[1] == 3 && gv.ranks[2] == 4,
                             "wrong growth vector");
                     require(o, gv.min_gap >= 10.0, "singular-value gap below 10x threshold");
                 }
         }},
        {2, "coordinate-change intertwining: straightened frame against the Lorentzian coframe",
         [](Outcome& o) {
             Rng rng(43);
             const auto d0 = EngelModel::cartan_d0();
             const auto lorentz = EngelModel::lorentzian();
             for (int i = 0; i < 100; ++i) {
                 const Point4 p = seeded_point(rng, 2.0);
                 const Frame fr = d0.frame_at(p);
                 const auto J = cartan_change_jacobian(p);
                 const Point4 q = cartan_change_of_coordinates(p);
                 const CoframePair cf = lorentz.coframe_at(q);
                 for (const Vec4& v0 : {fr.v1, fr.v2}) {
                     Vec4 v;
                     for (int r = 0; r < 4; ++r)
                         v[r] = J[r * 4 + 0] * v0.x + J[r * 4 + 1] * v0.y + J[r * 4 + 2] * v0.z +
                                J[r * 4 + 3] * v0.t;
                     const double resid =
                         std::abs(eval_form(cf.alpha, v)) + std::abs(eval_form(cf.beta, v));
                     require(o, resid < 1e-9, "intertwining residual " + std::to_string(resid));
                 }
             }
         }},
        {3, "Geiges roundtrip and area constraint on 50 seeded loops",
         [&digest3](Outcome& o) { digest3 = run_roundtrips(o); }},
        {4, "rotation-number coherence for n in {-3..3} and 20 reparametrizations",
         [](Outcome& o) {
             const auto darboux = EngelModel::darboux();
             for (int n = -3; n <= 3; ++n) {
                 const auto c = samples::standard_loop(n, 2048, 77 + n, 0.05);
                 require(o, rotation_number(c, darboux) == n, "rotation != construction parameter");
                 for (std::uint64_t s = 0; s < 20; ++s)
                     require(o, rotation_number(samples::reparametrize(c, s), darboux) == n,
                             "not invariant under reparametrization");
             }
         }},
        {5, "lemma2_search rigidity: equal endpoints force max|t| < 1e-7 from 20 starts",
         [](Outcome& o) {
             const auto rep = rigidity::lemma2_search(0.0, 0.0, 0.0, 1.0, 20, 99, 512);
             require(o, rep.starts.size() == 20, "start count");
             for (const auto& st : rep.starts) {
                 require(o, st.converged, "a start failed to converge");
                 require(o, st.max_abs_t < 1e-7,
                         "max |t| = " + std::to_string(st.max_abs_t));
             }
         }},
        {6, "area-positivity certificate on 100 seeded admissible fronts",
         [&digest6](Outcome& o) { digest6 = run_certificates(o); }},
        {7, "build_example4 closure algebra for A in {1e-4, 0.01, 0.3}",
         [](Outcome& o) {
             const auto torus = EngelModel::mapping_torus(TurningFn::linear(kPi),
                                                          Contactomorphism3::half_scaling());
             for (double A : {1e-4, 0.01, 0.3}) {
                 const auto d = rigidity::build_example4(A);
                 require(o, d.closure_defect < 1e-8, "closure defect");
                 require(o, horizontality_residual(d.curve, torus) < 1e-6, "residual");
                 require(o, std::abs(d.curve.points.back().y - 2.0 * A) <= 1e-12 * std::max(1.0, A),
                         "y(1) != 2A");
                 require(o, std::abs(d.curve.points.front().y - A) <= 1e-12, "y(0) != A");
             }
         }},
        {8, "build_example5 area identity on 100 seeded (alpha, r) pairs",
         [](Outcome& o) {
             Rng rng(7);
             for (int i = 0; i < 100; ++i) {
                 const double alpha = rng.uniform(0.03, kPi - 0.03);
                 const double r = rng.uniform(0.05, 2.0);
                 const auto res = rigidity::build_example5(alpha, r, 8192);
                 require(o,
                         std::abs(res.closed_form - res.polyline_integral) <=
                             1e-12 * std::max(1.0, std::abs(res.closed_form)),
                         "identity residual");
                 require(o, res.deformation.closure_defect < 1e-8, "closure defect");
             }
             const auto pinned = rigidity::build_example5(0.5 * kPi, 1.0, 8192);
             require(o, std::abs(pinned.closed_form - 0.5) < 1e-14, "pinned closed form");
             require(o, std::abs(pinned.polyline_integral - 0.5) < 1e-14, "pinned polyline");
         }},
        {9, "prop7_deform on 20 seeded non-strict linear contactomorphisms",
         [](Outcome& o) {
             Rng rng(12);
             int done = 0;
             while (done < 20) {
                 double c = rng.uniform(0.2, 5.0);
                 if (c > 0.99 && c < 1.01) continue;
                 const double a = std::exp(rng.uniform(-0.5, 0.5));
                 const double b = rng.uniform(-0.3, 0.3);
                 const auto phi = Contactomorphism3::linear_lift(a, b, 0.0, c / a);
                 const auto d = rigidity::prop7_deform(phi, 16384);
                 require(o, d.closure_defect < 1e-8,
                         "defect " + std::to_string(d.closure_defect) + " at c = " +
                             std::to_string(c));
                 ++done;
             }
             bool threw = false;
             try {
                 rigidity::prop7_deform(Contactomorphism3::identity());
             } catch (const Error& e) {
                 threw = e.token() == "StrictConformal";
             }
             require(o, threw, "StrictConformal not raised for c = 1");
         }},
        {10, "homotopy engine on 10 seeded equal-rotation pairs",
         [&digest10](Outcome& o) { digest10 = run_homotopies(o); }},
        {11, "make_generic transversality on 5 constructed degenerate families",
         [](Outcome& o) {
             const auto darboux = EngelModel::darboux();
             for (std::uint64_t i = 0; i < 5; ++i) {
                 const auto fam = samples::grazing_family(17, 1024, 300 + i);
                 require(o, !tangency_indicator_transverse(fam, darboux),
                         "constructed family already transverse");
                 const auto rep = make_generic(fam, darboux, 1e-3, {.seed = 300 + i});
                 require(o, tangency_indicator_transverse(rep.family, darboux),
                         "indicator still degenerate");
                 require(o, rep.c0_distance <= 1e-3, "C0 budget exceeded");
                 require(o, rep.c1_distance <= 1e-3, "C1 budget exceeded");
                 for (const auto& c : rep.family.curves)
                     require(o,
                             tangency_locus(c, darboux).cls != TangencyClass::EverywhereTangent,
                             "class not preserved");
             }
         }},
        {12, "transverse_residual: plane families and subcritical domain",
         [](Outcome& o) {
             const auto darboux = EngelModel::darboux();
             require(o, transverse_residual(samples::yz_plane_grid(33), darboux) > 0.0,
                     "yz-plane residual not positive");
             require(o, transverse_residual(samples::xt_plane_grid(33), darboux) < 1e-10,
                     "tangent-plane residual not zero");
             bool threw = false;
             GridMap line;
             line.axis_params = {linspace(0.0, 1.0, 16)};
             line.points.resize(16);
             for (std::size_t i = 0; i < 16; ++i) line.points[i] = {double(i) / 15.0, 0, 0, 0};
             try {
                 transverse_residual(line, darboux);
             } catch (const Error& e) {
                 threw = e.token() == "SubcriticalDomain";
             }
             require(o, threw, "SubcriticalDomain not raised");
         }},
        {13, "determinism: criteria 3, 6, 10 reproduce byte-identical outputs",
         [&](Outcome& o) {
             Outcome scratch;
             const std::string r3 = run_roundtrips(scratch);
             const std::string r6 = run_certificates(scratch);
             const std::string r10 = run_homotopies(scratch);
             require(o, scratch.pass, "re-run failed: " + scratch.detail);
             require(o, r3 == digest3, "criterion-3 output differs between runs");
             require(o, r6 == digest6, "criterion-6 output differs between runs");
             require(o, r10 == digest10, "criterion-10 output differs between runs");
             const auto dir = std::filesystem::temp_directory_path() / "engel_acceptance";
             std::filesystem::create_directories(dir);
             io::write_file((dir / "criterion3.jsonl").string(), r3);
             io::write_file((dir / "criterion6.jsonl").string(), r6);
             io::write_file((dir / "criterion10.txt").string(), r10);
             for (const char* name : {"criterion3.jsonl", "criterion6.jsonl", "criterion10.txt"}) {
                 const std::string back = io::read_file((dir / name).string());
                 const std::string* ref = std::strcmp(name, "criterion3.jsonl") == 0 ? &digest3
                                          : std::strcmp(name, "criterion6.jsonl") == 0 ? &digest6
                                                                                       : &digest10;
                 require(o, back == *ref, std::string("file roundtrip differs: ") + name);
             }
         }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        Outcome o;
        const auto start = Clock::now();
        try {
            c.fn(o);
        } catch (const Error& e) {
            o.pass = false;
            o.detail = e.what();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.name, secs, o.detail.empty() ? "" : " -- ", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
