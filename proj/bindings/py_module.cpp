#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "engel/homotopy.hpp"
#include "engel/io.hpp"
#include "engel/rigidity.hpp"
#include "engel/samples.hpp"
#include "engel/svg.hpp"

namespace py = pybind11;
using namespace engel;

namespace {

EngelModel model_by_name(const std::string& name) {
    if (name == "mapping_torus")
        return EngelModel::mapping_torus(TurningFn::linear(kPi), Contactomorphism3::identity());
    const ModelKind kind = model_kind_from_string(name);
    switch (kind) {
        case ModelKind::Darboux: return EngelModel::darboux();
        case ModelKind::Lorentzian: return EngelModel::lorentzian();
        case ModelKind::CartanD0: return EngelModel::cartan_d0();
        default: fail("IoFailure", "use engel_model_from_json for mapping-torus models");
    }
}

std::vector<std::array<double, 4>> points_of(const SampledCurve& c) {
    std::vector<std::array<double, 4>> out;
    out.reserve(c.size());
    for (const Point4& p : c.points) out.push_back({p.x, p.y, p.z, p.t});
    return out;
}

}  // namespace

PYBIND11_MODULE(_engeltk, m) {
    m.doc() = "Horizontal and transverse curves in the 4-dimensional Engel coordinate models";

    py::register_exception<Error>(m, "EngelError");

    py::class_<SampledCurve>(m, "SampledCurve")
        .def(py::init<>())
        .def_readwrite("params", &SampledCurve::params)
        .def_readwrite("closed", &SampledCurve::closed)
        .def_property(
            "points", [](const SampledCurve& c) { return points_of(c); },
            [](SampledCurve& c, const std::vector<std::array<double, 4>>& pts) {
                c.points.clear();
                for (const auto& p : pts) c.points.push_back({p[0], p[1], p[2], p[3]});
            })
        .def("__len__", [](const SampledCurve& c) { return c.size(); })
        .def("to_json", [](const SampledCurve& c) { return io::curve_to_json(c); })
        .def_static("from_json", [](const std::string& s) { return io::curve_from_json(s); });

    py::class_<LegendrianCurve>(m, "LegendrianCurve")
        .def(py::init<>())
        .def_readwrite("params", &LegendrianCurve::params)
        .def_readwrite("x", &LegendrianCurve::x)
        .def_readwrite("z", &LegendrianCurve::z)
        .def_readwrite("t", &LegendrianCurve::t)
        .def_readwrite("closed", &LegendrianCurve::closed)
        .def("to_json", [](const LegendrianCurve& l) { return io::legendrian_to_json(l); })
        .def_static("from_json", [](const std::string& s) { return io::legendrian_from_json(s); });

    py::class_<fronts::Front>(m, "Front")
        .def(py::init<>())
        .def_readwrite("params", &fronts::Front::params)
        .def_readwrite("x", &fronts::Front::x)
        .def_readwrite("z", &fronts::Front::z)
        .def_readwrite("cusp_marks", &fronts::Front::cusp_marks)
        .def_readwrite("slope_bound", &fronts::Front::slope_bound)
        .def("to_json", [](const fronts::Front& f) { return io::front_to_json(f); })
        .def_static("from_json", [](const std::string& s) { return io::front_from_json(s); });

    // models
    m.def("growth_vector", [](const std::string& model, std::array<double, 4> p, double h) {
        const auto gv = growth_vector(model_by_name(model), {p[0], p[1], p[2], p[3]}, h);
        return py::make_tuple(gv.ranks[0], gv.ranks[1], gv.ranks[2], gv.min_gap);
    }, py::arg("model"), py::arg("point"), py::arg("h") = 1e-4);
    m.def("eval_frame", [](const std::string& model, std::array<double, 4> p) {
        const auto fr = eval_frame(model_by_name(model), {p[0], p[1], p[2], p[3]});
        return py::make_tuple(std::array<double, 4>{fr.v1.x, fr.v1.y, fr.v1.z, fr.v1.t},
                              std::array<double, 4>{fr.v2.x, fr.v2.y, fr.v2.z, fr.v2.t});
    });
    m.def("cartan_change_of_coordinates", [](std::array<double, 4> p) {
        const auto q = cartan_change_of_coordinates({p[0], p[1], p[2], p[3]});
        return std::array<double, 4>{q.x, q.y, q.z, q.t};
    });
    m.def("conformal_factor", [](const std::string& id, std::vector<double> params,
                                 std::array<double, 3> q) {
        return contact_conformal_factor(Contactomorphism3::from_registry(id, params),
                                        {q[0], q[1], q[2]});
    });

    // curves
    m.def("horizontality_residual", [](const SampledCurve& c, const std::string& model) {
        return horizontality_residual(c, model_by_name(model));
    }, py::arg("curve"), py::arg("model") = "darboux");
    m.def("rotation_number", [](const SampledCurve& c, const std::string& model) {
        return rotation_number(c, model_by_name(model));
    }, py::arg("curve"), py::arg("model") = "darboux");
    m.def("tangency_class", [](const SampledCurve& c, const std::string& model, double tol) {
        return to_string(tangency_locus(c, model_by_name(model), tol).cls);
    }, py::arg("curve"), py::arg("model") = "darboux", py::arg("tol_angle") = kTolAngle);
    m.def("developing_turns", [](const SampledCurve& c, const std::string& model) {
        return developing_turns(c, model_by_name(model));
    });

    // geiges
    m.def("geiges_project", [](const SampledCurve& c, double tol) {
        return geiges_project(c, tol);
    }, py::arg("curve"), py::arg("tol") = 1e-6);
    m.def("geiges_lift", &geiges_lift, py::arg("legendrian"), py::arg("y0") = 0.0);
    m.def("front_signed_area", &front_signed_area);

    // fronts
    m.def("signed_area", &fronts::signed_area);
    m.def("detect_cusps", [](const std::vector<double>& params, const std::vector<double>& x,
                             const std::vector<double>& z) {
        return fronts::detect_cusps(params, x, z, {});
    });
    m.def("insert_r1_loop", &fronts::insert_r1_loop, py::arg("front"), py::arg("s0"),
          py::arg("area"), py::arg("half_width") = 0.0);
    m.def("adjust_area_to", [](const fronts::Front& f, double target,
                               const std::vector<std::pair<double, double>>& windows) {
        std::vector<fronts::Window> ws;
        for (const auto& [lo, hi] : windows) ws.push_back({lo, hi});
        return fronts::adjust_area_to(f, target, ws);
    });
    m.def("positive_area_certificate", [](const fronts::Front& f) {
        const auto cert = fronts::positive_area_certificate(f);
        std::vector<py::dict> trace;
        for (const auto& step : cert.reduction_trace) {
            py::dict d;
            d["removed_area"] = step.removed_area;
            d["cusps_before"] = step.cusps_before;
            d["cusps_after"] = step.cusps_after;
            trace.push_back(d);
        }
        py::dict out;
        out["total_area"] = cert.total_area;
        out["reduction_trace"] = trace;
        return out;
    });
    m.def("generate_admissible_front", &fronts::generate_admissible_front, py::arg("n_cusps"),
          py::arg("seed"), py::arg("samples") = 4096);

    // rigidity
    m.def("lemma2_search", [](double z0, double z1, double a, double b, int starts,
                              std::uint64_t seed) {
        const auto rep = rigidity::lemma2_search(z0, z1, a, b, starts, seed);
        std::vector<py::dict> out;
        for (const auto& st : rep.starts) {
            py::dict d;
            d["max_abs_t"] = st.max_abs_t;
            d["defect"] = st.defect;
            d["converged"] = st.converged;
            out.push_back(d);
        }
        return out;
    }, py::arg("z0"), py::arg("z1"), py::arg("a") = 0.0, py::arg("b") = 1.0,
       py::arg("starts") = 20, py::arg("seed") = 1);
    m.def("build_example4", [](double area, std::size_t samples) {
        const auto d = rigidity::build_example4(area, samples);
        py::dict out;
        out["closure_defect"] = d.closure_defect;
        out["angle_residual"] = d.angle_residual;
        out["curve"] = d.curve;
        out["front"] = d.front;
        return out;
    }, py::arg("area"), py::arg("samples") = 32768);
    m.def("build_example5", [](double alpha, double r, std::size_t samples) {
        const auto res = rigidity::build_example5(alpha, r, samples);
        py::dict out;
        out["closed_form"] = res.closed_form;
        out["polyline_integral"] = res.polyline_integral;
        out["closure_defect"] = res.deformation.closure_defect;
        return out;
    }, py::arg("alpha"), py::arg("r") = 1.0, py::arg("samples") = 16384);
    m.def("prop7_deform", [](double a, double b, double c, double d, std::size_t samples) {
        const auto res = rigidity::prop7_deform(Contactomorphism3::linear_lift(a, b, c, d), samples);
        py::dict out;
        out["closure_defect"] = res.closure_defect;
        out["y1"] = res.curve.points.back().y;
        return out;
    }, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("samples") = 16384);

    // homotopy
    m.def("connect_loops", [](const SampledCurve& c0, const SampledCurve& c1, std::size_t slices) {
        const auto fam = homotopy::connect_loops(c0, c1, {.slices = slices});
        const auto check = homotopy::verify_family(fam, EngelModel::darboux());
        py::dict out;
        out["slices"] = fam.slices.size();
        out["pass"] = check.pass;
        out["worst_residual"] = check.worst_residual;
        out["worst_closure"] = check.worst_closure;
        out["rotation_constant"] = check.rotation_constant;
        out["r1_loops_per_slice"] = fam.r1_loops_per_slice;
        std::vector<SampledCurve> slices_out(fam.slices.begin(), fam.slices.end());
        out["curves"] = slices_out;
        return out;
    }, py::arg("c0"), py::arg("c1"), py::arg("slices") = 64);

    // samples and plots
    m.def("standard_loop", [](int rot, std::size_t samples, std::uint64_t seed, double scale) {
        return samples::standard_loop(rot, samples, seed, scale);
    }, py::arg("rotation"), py::arg("samples") = 2048, py::arg("seed") = 1,
       py::arg("scale") = 0.05);
    m.def("loop_pair", &samples::loop_pair, py::arg("rotation"), py::arg("samples") = 2048,
          py::arg("seed") = 1);
    m.def("front_svg", [](const fronts::Front& f) { return svg::front_svg(f); });
}
