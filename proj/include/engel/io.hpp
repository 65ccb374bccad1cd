#pragma once

#include <string>

#include "engel/curves.hpp"
#include "engel/fronts.hpp"
#include "engel/geiges.hpp"
#include "engel/homotopy.hpp"

namespace engel::io {

/// All writers emit numbers as decimal with 17 significant digits and a fixed
/// field order, so identical data produces identical bytes.

std::string format_number(double v);

std::string curve_to_json(const SampledCurve& c);
SampledCurve curve_from_json(const std::string& text);

std::string legendrian_to_json(const LegendrianCurve& l);
LegendrianCurve legendrian_from_json(const std::string& text);

std::string front_to_json(const fronts::Front& f);
fronts::Front front_from_json(const std::string& text);

std::string model_to_json(const EngelModel& m);
EngelModel model_from_json(const std::string& text);

std::string grid_map_to_json(const GridMap& g);
GridMap grid_map_from_json(const std::string& text);

/// Family container: manifest with the report table plus one curve file per
/// slice (written next to the manifest as <stem>_NNN.json).
void write_family(const homotopy::HomotopyFamily& fam, const std::string& dir);
homotopy::HomotopyFamily read_family(const std::string& dir);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace engel::io
