// engel: command-line toolkit for horizontal and transverse curves in the
// 4-dimensional Engel coordinate models. One subcommand per operation; all
// numeric output uses 17 significant digits and a line-oriented key=value
// machine section. Exit codes: 0 ok, 1 validation failure, 2 usage error,
// 3 numerical failure.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "engel/homotopy.hpp"
#include "engel/io.hpp"
#include "engel/rigidity.hpp"
#include "engel/samples.hpp"
#include "engel/svg.hpp"

using namespace engel;

namespace {

struct GlobalArgs {
    std::string model = "darboux";
    std::string model_file;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    std::size_t samples = 2048;
    std::string out;
};

EngelModel resolve_model(const GlobalArgs& g) {
    if (!g.model_file.empty()) return io::model_from_json(io::read_file(g.model_file));
    if (g.model == "mapping_torus")
        return EngelModel::mapping_torus(TurningFn::linear(kPi), Contactomorphism3::identity());
    const ModelKind kind = model_kind_from_string(g.model);
    switch (kind) {
        case ModelKind::Darboux: return EngelModel::darboux();
        case ModelKind::Lorentzian: return EngelModel::lorentzian();
        case ModelKind::CartanD0: return EngelModel::cartan_d0();
        default: fail("IoFailure", "mapping-torus models need --model-file");
    }
}

void kv(const std::string& key, double value) {
    std::printf("%s=%s\n", key.c_str(), io::format_number(value).c_str());
}

void kv(const std::string& key, const std::string& value) {
    std::printf("%s=%s\n", key.c_str(), value.c_str());
}

int exit_code_for(const Error& e) {
    const std::string& t = e.token();
    if (t == "NoConvergence" || t == "NumericallyDegenerate" || t == "RankAmbiguous") return 3;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Engel-model curve toolkit"};
    app.require_subcommand(1);
    app.fallthrough(true);

    GlobalArgs g;
    app.add_option("--model", g.model, "built-in model: darboux|lorentzian|cartan_d0");
    app.add_option("--model-file", g.model_file, "model manifest (JSON)");
    app.add_option("--seed", g.seed, "seed for randomized constructions");
    app.add_option("--tol", g.tol, "tolerance where one applies");
    app.add_option("--samples", g.samples, "sample count for constructions");
    app.add_option("-o,--out", g.out, "output path (file or directory)");

    std::string in_a, in_b;
    double y0 = 0.0, target = 0.0, area = 0.1, alpha = kPi / 2, radius = 1.0;
    double z0 = 0.0, z1 = 0.0, s0 = 0.5, dA = 0.0, delta = 1e-3;
    int rot = 1, n_starts = 20, slices = 64, cusps = 5;
    std::vector<double> lin{2.0, 0.0, 0.0, 2.0};
    std::vector<double> point{0, 0, 0, 0};

    auto* validate = app.add_subcommand("validate", "horizontality residual of a curve file");
    validate->add_option("curve", in_a)->required();

    auto* project = app.add_subcommand("project", "Geiges projection of a horizontal curve");
    project->add_option("curve", in_a)->required();

    auto* lift = app.add_subcommand("lift", "integral lift of a Legendrian curve");
    lift->add_option("legendrian", in_a)->required();
    lift->add_option("--y0", y0, "starting y value");

    auto* rotnum = app.add_subcommand("rotnum", "rotation number of a closed curve");
    rotnum->add_option("curve", in_a)->required();

    auto* devmap = app.add_subcommand("devmap", "developing-map turns of a kernel-tangent segment");
    devmap->add_option("curve", in_a)->required();

    auto* tangency = app.add_subcommand("tangency", "kernel tangency locus of a curve");
    tangency->add_option("curve", in_a)->required();

    auto* generic = app.add_subcommand("generic", "perturb a demo family to discrete transversality");
    generic->add_option("--delta", delta, "perturbation budget");

    auto* area_cmd = app.add_subcommand("area", "signed front area of a closed Legendrian or front");
    area_cmd->add_option("file", in_a)->required();

    auto* adjust = app.add_subcommand("adjust-area", "Reidemeister-I area adjustment of a front");
    adjust->add_option("front", in_a)->required();
    adjust->add_option("--target", target)->required();
    adjust->add_option("--window-lo", z0)->required();
    adjust->add_option("--window-hi", z1)->required();

    auto* insert = app.add_subcommand("insert-loop", "insert one Reidemeister-I loop");
    insert->add_option("front", in_a)->required();
    insert->add_option("--at", s0, "insertion parameter");
    insert->add_option("--area", dA, "signed area of the loop")->required();

    auto* certify = app.add_subcommand("certify", "area-positivity certificate of an admissible front");
    certify->add_option("front", in_a, "front file; omit to certify a seeded generated front");
    certify->add_option("--cusps", cusps, "cusp count for the generated front");

    auto* rigidity_cmd = app.add_subcommand("rigidity", "deformation search for kernel segments");
    rigidity_cmd->add_option("--z0", z0)->required();
    rigidity_cmd->add_option("--z1", z1)->required();
    rigidity_cmd->add_option("--starts", n_starts);

    auto* ex4 = app.add_subcommand("example4", "one-projective-turn teardrop deformation");
    ex4->add_option("--area", area)->required();

    auto* ex5 = app.add_subcommand("example5", "short developing-map deformation");
    ex5->add_option("--alpha", alpha)->required();
    ex5->add_option("--radius", radius);

    auto* prop7 = app.add_subcommand("prop7", "deformation for a non-strict linear return map");
    prop7->add_option("--map", lin, "plane map entries a b c d")->expected(4);

    auto* connect = app.add_subcommand("connect", "homotopy between equal-rotation loops");
    connect->add_option("curve0", in_a)->required();
    connect->add_option("curve1", in_b)->required();
    connect->add_option("--slices", slices);

    auto* verify = app.add_subcommand("verify-family", "re-check a stored homotopy family");
    verify->add_option("dir", in_a)->required();

    auto* transverse = app.add_subcommand("transverse", "transversality residual of a sampled map");
    transverse->add_option("grid", in_a)->required();

    auto* plot = app.add_subcommand("plot", "SVG plot of a front or Legendrian file");
    plot->add_option("file", in_a)->required();

    auto* make_loop = app.add_subcommand("make-loop", "write a seeded horizontal loop");
    make_loop->add_option("--rotation", rot);

    auto* growth = app.add_subcommand("growth", "growth vector of the model at a point");
    growth->add_option("--point", point, "x y z t")->expected(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const EngelModel model = resolve_model(g);

        if (*validate) {
            const auto c = io::curve_from_json(io::read_file(in_a));
            const double r = horizontality_residual(c, model);
            kv("residual", r);
            kv("samples", double(c.size()));
            if (r > g.tol) {
                kv("status", "NotHorizontal");
                return 1;
            }
            kv("status", "ok");
        } else if (*project) {
            const auto c = io::curve_from_json(io::read_file(in_a));
            const auto l = geiges_project(c, g.tol);
            kv("legendrian_residual", legendrian_residual(l));
            if (!g.out.empty()) io::write_file(g.out, io::legendrian_to_json(l));
            kv("status", "ok");
        } else if (*lift) {
            const auto l = io::legendrian_from_json(io::read_file(in_a));
            const auto c = geiges_lift(l, y0);
            kv("y_defect", c.points.back().y - c.points.front().y);
            kv("closed", c.closed ? "true" : "false");
            if (!g.out.empty()) io::write_file(g.out, io::curve_to_json(c));
            kv("status", "ok");
        } else if (*rotnum) {
            const auto c = io::curve_from_json(io::read_file(in_a));
            kv("rotation", double(rotation_number(c, model)));
            kv("status", "ok");
        } else if (*devmap) {
            const auto c = io::curve_from_json(io::read_file(in_a));
            kv("turns", double(developing_turns(c, model)));
            kv("total_angle", developing_total_angle(c, model));
            kv("status", "ok");
        } else if (*tangency) {
            const auto c = io::curve_from_json(io::read_file(in_a));
            const auto locus = tangency_locus(c, model, kTolAngle);
            kv("class", to_string(locus.cls));
            kv("intervals", double(locus.intervals.size()));
            for (std::size_t i = 0; i < locus.intervals.size(); ++i) {
                kv("interval_" + std::to_string(i) + "_lo", locus.intervals[i].first);
                kv("interval_" + std::to_string(i) + "_hi", locus.intervals[i].second);
            }
            kv("status", "ok");
        } else if (*generic) {
            const auto darboux = EngelModel::darboux();
            const auto fam = samples::grazing_family(17, 1024, g.seed);
            const auto rep = make_generic(fam, darboux, delta, {.seed = g.seed});
            kv("transverse",
               tangency_indicator_transverse(rep.family, darboux) ? "true" : "false");
            kv("c0_distance", rep.c0_distance);
            kv("c1_distance", rep.c1_distance);
            kv("rounds", double(rep.rounds));
            kv("status", "ok");
        } else if (*area_cmd) {
            const std::string text = io::read_file(in_a);
            double a;
            if (text.find("\"legendrian\"") != std::string::npos)
                a = front_signed_area(io::legendrian_from_json(text));
            else
                a = fronts::signed_area(io::front_from_json(text));
            kv("signed_area", a);
            kv("status", "ok");
        } else if (*adjust) {
            const auto f = io::front_from_json(io::read_file(in_a));
            fronts::AreaAdjustPlan plan;
            const auto out = fronts::adjust_area_to(f, target, {{z0, z1}}, {}, &plan);
            kv("achieved", fronts::signed_area(out));
            kv("loops", double(plan.n_loops));
            if (!g.out.empty()) io::write_file(g.out, io::front_to_json(out));
            kv("status", "ok");
        } else if (*insert) {
            const auto f = io::front_from_json(io::read_file(in_a));
            const auto out = fronts::insert_r1_loop(f, s0, dA);
            kv("cusps", double(out.cusp_marks.size()));
            if (!g.out.empty()) io::write_file(g.out, io::front_to_json(out));
            kv("status", "ok");
        } else if (*certify) {
            fronts::Front f;
            if (!in_a.empty())
                f = io::front_from_json(io::read_file(in_a));
            else
                f = fronts::generate_admissible_front(cusps, g.seed, g.samples);
            const auto cert = fronts::positive_area_certificate(f);
            kv("total_area", cert.total_area);
            kv("reduction_steps", double(cert.reduction_trace.size()));
            for (std::size_t i = 0; i < cert.reduction_trace.size(); ++i) {
                kv("step_" + std::to_string(i) + "_removed", cert.reduction_trace[i].removed_area);
                kv("step_" + std::to_string(i) + "_cusps_after",
                   double(cert.reduction_trace[i].cusps_after));
            }
            if (!g.out.empty()) io::write_file(g.out, io::front_to_json(f));
            kv("status", "ok");
        } else if (*rigidity_cmd) {
            const auto rep = rigidity::lemma2_search(z0, z1, 0.0, 1.0, n_starts, g.seed);
            const auto& best = rep.starts[std::size_t(rep.best)];
            kv("best_defect", best.defect);
            kv("best_max_abs_t", best.max_abs_t);
            double worst = 0.0;
            for (const auto& st : rep.starts) worst = std::max(worst, st.max_abs_t);
            kv("worst_max_abs_t", worst);
            kv("status", "ok");
        } else if (*ex4) {
            const auto d = rigidity::build_example4(area, std::max<std::size_t>(g.samples, 16384));
            kv("closure_defect", d.closure_defect);
            kv("angle_residual", d.angle_residual);
            kv("y0", d.curve.points.front().y);
            kv("y1", d.curve.points.back().y);
            if (!g.out.empty()) io::write_file(g.out, io::front_to_json(d.front));
            kv("status", "ok");
        } else if (*ex5) {
            const auto r =
                rigidity::build_example5(alpha, radius, std::max<std::size_t>(g.samples, 16384));
            kv("closed_form", r.closed_form);
            kv("polyline_integral", r.polyline_integral);
            kv("identity_residual", std::abs(r.closed_form - r.polyline_integral));
            kv("closure_defect", r.deformation.closure_defect);
            if (!g.out.empty()) io::write_file(g.out, io::front_to_json(r.deformation.front));
            kv("status", "ok");
        } else if (*prop7) {
            const auto phi = Contactomorphism3::linear_lift(lin[0], lin[1], lin[2], lin[3]);
            kv("conformal_factor", contact_conformal_factor(phi, {0, 0, 0}));
            const auto d = rigidity::prop7_deform(phi, std::max<std::size_t>(g.samples, 16384));
            kv("closure_defect", d.closure_defect);
            kv("y1", d.curve.points.back().y);
            if (!g.out.empty()) io::write_file(g.out, io::front_to_json(d.front));
            kv("status", "ok");
        } else if (*connect) {
            const auto c0 = io::curve_from_json(io::read_file(in_a));
            const auto c1 = io::curve_from_json(io::read_file(in_b));
            const auto fam = homotopy::connect_loops(c0, c1, {.slices = std::size_t(slices)});
            const auto check = homotopy::verify_family(fam, model, g.tol, 1e-9);
            kv("slices", double(fam.slices.size()));
            kv("worst_residual", check.worst_residual);
            kv("worst_closure", check.worst_closure);
            kv("rotation_constant", check.rotation_constant ? "true" : "false");
            kv("r1_loops_per_slice", double(fam.r1_loops_per_slice));
            if (!g.out.empty()) io::write_family(fam, g.out);
            if (!check.pass) {
                kv("status", "FamilyCheckFailed");
                return 1;
            }
            kv("status", "ok");
        } else if (*verify) {
            const auto fam = io::read_family(in_a);
            const auto check = homotopy::verify_family(fam, model, g.tol, 1e-9);
            kv("worst_residual", check.worst_residual);
            kv("worst_closure", check.worst_closure);
            kv("first_bad_slice", double(check.first_bad_slice));
            kv("status", check.pass ? "ok" : "FamilyCheckFailed");
            return check.pass ? 0 : 1;
        } else if (*transverse) {
            const auto grid = io::grid_map_from_json(io::read_file(in_a));
            kv("residual", transverse_residual(grid, model));
            kv("status", "ok");
        } else if (*plot) {
            if (g.out.empty()) fail("IoFailure", "plot needs --out");
            const std::string text = io::read_file(in_a);
            std::string svg_text;
            if (text.find("\"legendrian\"") != std::string::npos) {
                svg_text = svg::legendrian_svg(io::legendrian_from_json(text));
            } else if (text.find("\"curve4\"") != std::string::npos) {
                // family slices and other curves plot through their front view
                const auto c = io::curve_from_json(text);
                fronts::Front f;
                f.params = c.params;
                for (const Point4& p : c.points) {
                    f.x.push_back(p.x);
                    f.z.push_back(p.z);
                }
                svg_text = svg::front_svg(f);
            } else {
                svg_text = svg::front_svg(io::front_from_json(text));
            }
            io::write_file(g.out, svg_text);
            kv("status", "ok");
        } else if (*make_loop) {
            const auto c = samples::standard_loop(rot, g.samples, g.seed);
            kv("rotation", double(rotation_number(c, EngelModel::darboux())));
            kv("residual", horizontality_residual(c, EngelModel::darboux()));
            if (!g.out.empty()) io::write_file(g.out, io::curve_to_json(c));
            kv("status", "ok");
        } else if (*growth) {
            const auto gv = growth_vector(model, {point[0], point[1], point[2], point[3]});
            kv("rank_d", double(gv.ranks[0]));
            kv("rank_e", double(gv.ranks[1]));
            kv("rank_tm", double(gv.ranks[2]));
            kv("min_gap", gv.min_gap);
            kv("status", "ok");
        }
        return 0;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        kv("status", e.token());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
