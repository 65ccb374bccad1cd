#include "engel/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "engel/numerics.hpp"

namespace engel::svg {

namespace {

struct Mapper {
    double x0, z0, scale, width, height;

    std::pair<double, double> operator()(double x, double z) const {
        return {(x - x0) * scale + 0.05 * width, height - ((z - z0) * scale + 0.05 * height)};
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

Mapper make_mapper(const std::vector<double>& x, const std::vector<double>& z,
                   const PlotOptions& opts) {
    double xlo = 1e300, xhi = -1e300, zlo = 1e300, zhi = -1e300;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xlo = std::min(xlo, x[i]);
        xhi = std::max(xhi, x[i]);
        zlo = std::min(zlo, z[i]);
        zhi = std::max(zhi, z[i]);
    }
    const double span_x = std::max(xhi - xlo, 1e-9), span_z = std::max(zhi - zlo, 1e-9);
    const double scale = std::min(0.9 * opts.width / span_x, 0.9 * opts.height / span_z);
    return {xlo, zlo, scale, double(opts.width), double(opts.height)};
}

std::string svg_of(const std::vector<double>& params, const std::vector<double>& x,
                   const std::vector<double>& z, const std::vector<double>& cusps,
                   const PlotOptions& opts) {
    const Mapper map = make_mapper(x, z, opts);
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
       << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<path d=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto [px, pz] = map(x[i], z[i]);
        os << (i == 0 ? 'M' : 'L') << fmt(px) << ' ' << fmt(pz);
    }
    os << "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>\n";

    for (const auto& [lo, hi] : opts.highlight_windows) {
        os << "<path d=\"";
        bool first = true;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (params[i] < lo || params[i] > hi) continue;
            const auto [px, pz] = map(x[i], z[i]);
            os << (first ? 'M' : 'L') << fmt(px) << ' ' << fmt(pz);
            first = false;
        }
        os << "\" fill=\"none\" stroke=\"#e8a33d\" stroke-width=\"3\" opacity=\"0.7\"/>\n";
    }

    if (opts.mark_cusps) {
        for (double c : cusps) {
            const auto it = std::lower_bound(params.begin(), params.end(), c);
            std::size_t i = std::min<std::size_t>(std::size_t(it - params.begin()), x.size() - 1);
            const auto [px, pz] = map(x[i], z[i]);
            os << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(pz)
               << "\" r=\"4\" fill=\"#222222\"/>\n";
        }
    }

    if (opts.endpoint_arrows && x.size() > 2) {
        auto arrow = [&](std::size_t i, std::size_t j) {
            const auto [ax, az] = map(x[i], z[i]);
            auto [bx, bz] = map(x[j], z[j]);
            const double dx = bx - ax, dz = bz - az;
            const double norm = std::hypot(dx, dz);
            if (norm < 1e-9) return;
            const double ex = ax + dx / norm * 30.0, ez = az + dz / norm * 30.0;
            os << "<line x1=\"" << fmt(ax) << "\" y1=\"" << fmt(az) << "\" x2=\"" << fmt(ex)
               << "\" y2=\"" << fmt(ez)
               << "\" stroke=\"#c23b3b\" stroke-width=\"2\" marker-end=\"url(#tip)\"/>\n";
        };
        os << "<defs><marker id=\"tip\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" "
              "orient=\"auto\"><path d=\"M0 0L6 3L0 6Z\" fill=\"#c23b3b\"/></marker></defs>\n";
        arrow(0, 1);
        arrow(x.size() - 2, x.size() - 1);
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace

std::string front_svg(const fronts::Front& f, const PlotOptions& opts) {
    return svg_of(f.params, f.x, f.z, f.cusp_marks, opts);
}

std::string legendrian_svg(const LegendrianCurve& l, const PlotOptions& opts) {
    return svg_of(l.params, l.x, l.z, {}, opts);
}

}  // namespace engel::svg
