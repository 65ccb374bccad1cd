#include "engel/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace engel::io {

using nlohmann::json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit_array(std::ostringstream& os, const std::vector<double>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << format_number(v[i]);
    }
    os << ']';
}

template <typename Row>
void emit_rows(std::ostringstream& os, const std::vector<Row>& rows, int dim) {
    os << '[';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) os << ',';
        os << '[';
        for (int d = 0; d < dim; ++d) {
            if (d) os << ',';
            os << format_number(rows[i][d]);
        }
        os << ']';
    }
    os << ']';
}

std::vector<double> parse_numbers(const json& j) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
}

}  // namespace

std::string curve_to_json(const SampledCurve& c) {
    std::ostringstream os;
    os << "{\"type\":\"curve4\",\"params\":";
    emit_array(os, c.params);
    os << ",\"points\":";
    emit_rows(os, c.points, 4);
    os << ",\"closed\":" << (c.closed ? "true" : "false");
    if (c.has_framing()) {
        os << ",\"framing\":";
        emit_rows(os, c.framing, 4);
    }
    os << "}\n";
    return os.str();
}

SampledCurve curve_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail("IoFailure", std::string("bad JSON: ") + e.what());
    }
    if (j.value("type", "") != "curve4") fail("IoFailure", "expected a curve4 file");
    SampledCurve c;
    c.params = parse_numbers(j.at("params"));
    for (const auto& row : j.at("points"))
        c.points.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                            row.at(2).get<double>(), row.at(3).get<double>()});
    c.closed = j.value("closed", false);
    if (j.contains("framing"))
        for (const auto& row : j.at("framing"))
            c.framing.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                                 row.at(2).get<double>(), row.at(3).get<double>()});
    validate_curve(c);
    return c;
}

std::string legendrian_to_json(const LegendrianCurve& l) {
    std::ostringstream os;
    os << "{\"type\":\"legendrian\",\"params\":";
    emit_array(os, l.params);
    os << ",\"points\":[";
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (i) os << ',';
        os << '[' << format_number(l.x[i]) << ',' << format_number(l.z[i]) << ','
           << format_number(l.t[i]) << ']';
    }
    os << "],\"closed\":" << (l.closed ? "true" : "false") << "}\n";
    return os.str();
}

LegendrianCurve legendrian_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail("IoFailure", std::string("bad JSON: ") + e.what());
    }
    if (j.value("type", "") != "legendrian") fail("IoFailure", "expected a legendrian file");
    LegendrianCurve l;
    l.params = parse_numbers(j.at("params"));
    for (const auto& row : j.at("points")) {
        l.x.push_back(row.at(0).get<double>());
        l.z.push_back(row.at(1).get<double>());
        l.t.push_back(row.at(2).get<double>());
    }
    l.closed = j.value("closed", false);
    return l;
}

std::string front_to_json(const fronts::Front& f) {
    std::ostringstream os;
    os << "{\"type\":\"front\",\"params\":";
    emit_array(os, f.params);
    os << ",\"points\":[";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) os << ',';
        os << '[' << format_number(f.x[i]) << ',' << format_number(f.z[i]) << ']';
    }
    os << "],\"cusp_marks\":";
    emit_array(os, f.cusp_marks);
    os << ",\"slope_bound\":";
    if (std::isfinite(f.slope_bound))
        os << format_number(f.slope_bound);
    else
        os << "null";
    os << "}\n";
    return os.str();
}

fronts::Front front_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail("IoFailure", std::string("bad JSON: ") + e.what());
    }
    if (j.value("type", "") != "front") fail("IoFailure", "expected a front file");
    fronts::Front f;
    f.params = parse_numbers(j.at("params"));
    for (const auto& row : j.at("points")) {
        f.x.push_back(row.at(0).get<double>());
        f.z.push_back(row.at(1).get<double>());
    }
    if (j.contains("cusp_marks")) f.cusp_marks = parse_numbers(j.at("cusp_marks"));
    if (j.contains("slope_bound") && !j.at("slope_bound").is_null())
        f.slope_bound = j.at("slope_bound").get<double>();
    return f;
}

std::string model_to_json(const EngelModel& m) {
    std::ostringstream os;
    os << "{\"type\":\"engel_model\",\"kind\":\"" << to_string(m.kind()) << "\"";
    if (m.kind() == ModelKind::MappingTorus) {
        os << ",\"turning\":{\"id\":\"" << m.turning().id << "\",\"coeffs\":";
        emit_array(os, m.turning().coeffs);
        os << "},\"return_map\":{\"id\":\"" << m.return_map().id() << "\",\"params\":";
        emit_array(os, m.return_map().params());
        os << "}";
    }
    os << "}\n";
    return os.str();
}

EngelModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail("IoFailure", std::string("bad JSON: ") + e.what());
    }
    const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
    switch (kind) {
        case ModelKind::Darboux: return EngelModel::darboux();
        case ModelKind::Lorentzian: return EngelModel::lorentzian();
        case ModelKind::CartanD0: return EngelModel::cartan_d0();
        case ModelKind::MappingTorus: {
            const auto& tj = j.at("turning");
            TurningFn turning;
            turning.id = tj.at("id").get<std::string>();
            turning.coeffs = parse_numbers(tj.at("coeffs"));
            if (turning.id == "custom") fail("IoFailure", "custom turning functions are not serializable");
            const auto& rj = j.at("return_map");
            const auto rm = Contactomorphism3::from_registry(rj.at("id").get<std::string>(),
                                                             parse_numbers(rj.at("params")));
            return EngelModel::mapping_torus(turning, rm);
        }
    }
    fail("IoFailure", "bad model kind");
}

std::string grid_map_to_json(const GridMap& g) {
    std::ostringstream os;
    os << "{\"type\":\"map_grid\",\"axes\":[";
    for (std::size_t a = 0; a < g.axis_params.size(); ++a) {
        if (a) os << ',';
        emit_array(os, g.axis_params[a]);
    }
    os << "],\"points\":";
    emit_rows(os, g.points, 4);
    os << "}\n";
    return os.str();
}

GridMap grid_map_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail("IoFailure", std::string("bad JSON: ") + e.what());
    }
    if (j.value("type", "") != "map_grid") fail("IoFailure", "expected a map_grid file");
    GridMap g;
    for (const auto& axis : j.at("axes")) g.axis_params.push_back(parse_numbers(axis));
    for (const auto& row : j.at("points"))
        g.points.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                            row.at(2).get<double>(), row.at(3).get<double>()});
    return g;
}

void write_family(const homotopy::HomotopyFamily& fam, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ostringstream manifest;
    manifest << "{\"type\":\"homotopy_family\",\"slices\":" << fam.slices.size()
             << ",\"r1_loops_per_slice\":" << fam.r1_loops_per_slice << ",\"time_grid\":";
    emit_array(manifest, fam.time_grid);
    manifest << ",\"report\":[";
    for (std::size_t k = 0; k < fam.report.size(); ++k) {
        if (k) manifest << ',';
        const auto& r = fam.report[k];
        manifest << "{\"residual\":" << format_number(r.residual)
                 << ",\"closure\":" << format_number(r.closure)
                 << ",\"front_area\":" << format_number(r.front_area)
                 << ",\"rotation\":" << r.rotation << ",\"tangency\":\"" << to_string(r.tangency)
                 << "\"}";
    }
    manifest << "]}\n";
    write_file(dir + "/family.json", manifest.str());
    for (std::size_t k = 0; k < fam.slices.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "slice_%03zu.json", k);
        write_file(dir + "/" + name, curve_to_json(fam.slices[k]));
    }
}

homotopy::HomotopyFamily read_family(const std::string& dir) {
    homotopy::HomotopyFamily fam;
    json j;
    try {
        j = json::parse(read_file(dir + "/family.json"));
    } catch (const std::exception& e) {
        fail("IoFailure", std::string("bad family manifest: ") + e.what());
    }
    fam.time_grid = parse_numbers(j.at("time_grid"));
    fam.r1_loops_per_slice = j.value("r1_loops_per_slice", 0);
    const std::size_t n = j.at("slices").get<std::size_t>();
    for (std::size_t k = 0; k < n; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "slice_%03zu.json", k);
        fam.slices.push_back(curve_from_json(read_file(dir + "/" + name)));
    }
    return fam;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoFailure", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoFailure", "cannot write '" + path + "'");
    out << content;
}

}  // namespace engel::io
