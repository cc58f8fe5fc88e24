#pragma once

// Standalone SVG plots of trajectory tables.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcsim/io.hpp"
#include "jcsim/observables.hpp"
#include "jcsim/presets.hpp"

namespace jcsim {

struct PathMetrics {
    double bbox_width = 0.0;
    double bbox_height = 0.0;
    double path_length = 0.0;
    /// path_length / (bbox_width + bbox_height): grows without bound for a
    /// curve that keeps filling its box, stays O(turns) for a closed orbit.
    double length_per_extent = 0.0;
    /// Fraction of a 20 x 20 grid over the bounding box whose cells hold a
    /// sample: small for a thin closed curve, near 1 for a filled region.
    double cell_coverage = 0.0;
};

inline PathMetrics path_metrics(const std::vector<double>& x, const std::vector<double>& y) {
    PathMetrics m;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    bool have_prev = false;
    double px = 0.0, py = 0.0;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        x0 = std::min(x0, x[i]);
        x1 = std::max(x1, x[i]);
        y0 = std::min(y0, y[i]);
        y1 = std::max(y1, y[i]);
        if (have_prev) m.path_length += std::hypot(x[i] - px, y[i] - py);
        px = x[i];
        py = y[i];
        have_prev = true;
    }
    if (!have_prev) return m;
    m.bbox_width = x1 - x0;
    m.bbox_height = y1 - y0;
    const double extent = m.bbox_width + m.bbox_height;
    m.length_per_extent = extent > 0.0 ? m.path_length / extent : 0.0;

    constexpr int kCells = 20;
    std::vector<char> hit(kCells * kCells, 0);
    auto cell = [](double v, double lo, double w) {
        if (w <= 0.0) return 0;
        return std::min(kCells - 1, static_cast<int>((v - lo) / w * kCells));
    };
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        hit[cell(y[i], y0, m.bbox_height) * kCells + cell(x[i], x0, m.bbox_width)] = 1;
    }
    m.cell_coverage = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / (kCells * kCells);
    return m;
}

/// Central-difference derivative of y with respect to t (one-sided at ends).
inline std::vector<double> central_difference(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = std::min(t.size(), y.size());
    std::vector<double> d(n, std::numeric_limits<double>::quiet_NaN());
    if (n < 2) return d;
    d[0] = (y[1] - y[0]) / (t[1] - t[0]);
    d[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
    return d;
}

namespace detail {

struct Series2d {
    std::vector<double> x, y;
    std::string x_label, y_label;
};

inline Series2d select_series(const Table& table, const PlotSpec& spec) {
    Series2d s;
    std::vector<double> t = table.has("t") ? table.column("t") : std::vector<double>{};
    auto windowed = [&](std::vector<double> v) {
        if (spec.t_max && !t.empty())
            for (std::size_t i = 0; i < v.size() && i < t.size(); ++i)
                if (t[i] > *spec.t_max) v[i] = std::numeric_limits<double>::quiet_NaN();
        return v;
    };
    switch (spec.kind) {
    case PlotKind::TimeSeries:
        s.x = windowed(table.column(spec.x));
        s.y = windowed(table.column(spec.y));
        s.x_label = spec.x;
        s.y_label = spec.y;
        break;
    case PlotKind::Portrait: {
        const auto& re = table.column("re_zeta");
        std::vector<double> dot;
        if (table.has("re_zeta_dot")) dot = table.column("re_zeta_dot");
        else dot = central_difference(table.column("t"), re);
        s.x = windowed(re);
        s.y = windowed(dot);
        s.x_label = "Re zeta";
        s.y_label = "d/dt Re zeta";
        break;
    }
    case PlotKind::Disc:
        s.x = windowed(table.column("re_zeta"));
        s.y = windowed(table.column("im_zeta"));
        s.x_label = "Re zeta";
        s.y_label = "Im zeta";
        break;
    case PlotKind::Bloch: {
        // orthographic view of the sphere, tilted 20 degrees toward the viewer
        const auto& re = table.column("re_zeta");
        const auto& im = table.column("im_zeta");
        const double tilt = 20.0 * std::numbers::pi / 180.0;
        for (std::size_t i = 0; i < re.size(); ++i) {
            const BlochPoint b = bloch_map(cplx{re[i], im[i]});
            const double X = std::sin(b.theta) * std::cos(b.phi);
            const double Y = std::sin(b.theta) * std::sin(b.phi);
            const double Z = std::cos(b.theta);
            s.x.push_back(Y);
            s.y.push_back(Z * std::cos(tilt) - X * std::sin(tilt));
        }
        s.x = windowed(s.x);
        s.y = windowed(s.y);
        s.x_label = "Bloch sphere (y)";
        s.y_label = "Bloch sphere (z)";
        break;
    }
    }
    return s;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

} // namespace detail

/// Renders one plot as a standalone SVG document with a single data
/// polyline. Throws if a column is missing or no finite point remains.
inline std::string emit_plot(const Table& table, const PlotSpec& spec, const std::string& title = {}) {
    const detail::Series2d s = detail::select_series(table, spec);

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    std::size_t finite = 0;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        ++finite;
        x0 = std::min(x0, s.x[i]);
        x1 = std::max(x1, s.x[i]);
        y0 = std::min(y0, s.y[i]);
        y1 = std::max(y1, s.y[i]);
    }
    if (finite == 0) throw std::invalid_argument("nothing to plot: no finite data points");
    const bool unit_frame = spec.kind == PlotKind::Disc || spec.kind == PlotKind::Bloch;
    if (unit_frame) {
        x0 = std::min(x0, -1.0);
        x1 = std::max(x1, 1.0);
        y0 = std::min(y0, -1.0);
        y1 = std::max(y1, 1.0);
    }
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }

    constexpr double W = 640, H = 480, L = 70, R = 20, T = 30, B = 50;
    const double pw = W - L - R, ph = H - T - B;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream os;
    os.precision(6);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) os << "<title>" << title << "</title>\n";
    os << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
       << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph << "\"/>\n"
       << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph << "\"/>\n"
       << "</g>\n";
    if (unit_frame) {
        // unit circle: disc boundary or sphere outline
        os << "<ellipse cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" rx=\"" << px(1) - px(0) << "\" ry=\""
           << py(0) - py(1) << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    }
    os << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<text class=\"x-label\" x=\"" << L + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
       << s.x_label << "</text>\n"
       << "<text class=\"y-label\" x=\"16\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << T + ph / 2 << ")\">" << s.y_label << "</text>\n"
       << "<text x=\"" << L << "\" y=\"" << T + ph + 16 << "\" text-anchor=\"middle\">" << detail::fmt(x0) << "</text>\n"
       << "<text x=\"" << L + pw << "\" y=\"" << T + ph + 16 << "\" text-anchor=\"middle\">" << detail::fmt(x1)
       << "</text>\n"
       << "<text x=\"" << L - 4 << "\" y=\"" << T + ph << "\" text-anchor=\"end\">" << detail::fmt(y0) << "</text>\n"
       << "<text x=\"" << L - 4 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">" << detail::fmt(y1) << "</text>\n"
       << "</g>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        if (!first) os << ' ';
        os << px(s.x[i]) << ',' << py(s.y[i]);
        first = false;
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

} // namespace jcsim
