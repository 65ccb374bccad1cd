#pragma once

#include <string>

#include "engel/fronts.hpp"
#include "engel/geiges.hpp"

namespace engel::svg {

struct PlotOptions {
    int width = 800;
    int height = 600;
    bool mark_cusps = true;
    bool endpoint_arrows = true;   // tangent vectors at the ends, front style
    std::vector<std::pair<double, double>> highlight_windows;  // parameter ranges
};

/// Standalone SVG of a planar front: the curve as a path, cusps as dots,
/// highlighted parameter windows as overlaid strokes, endpoint tangent arrows.
/// Byte-deterministic for identical input.
std::string front_svg(const fronts::Front& f, const PlotOptions& opts = {});

/// Front-projection view of a Legendrian curve.
std::string legendrian_svg(const LegendrianCurve& l, const PlotOptions& opts = {});

}  // namespace engel::svg
