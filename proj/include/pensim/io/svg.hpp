#pragma once

// Bare-bones SVG line/scatter charts: axes, ticks, legend. Output is a pure
// function of the input so plots diff cleanly between runs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pensim/io/csv.hpp"

namespace pensim::io {

enum class SeriesStyle { line, scatter };

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    SeriesStyle style = SeriesStyle::line;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    int width = 720;
    int height = 440;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// "Nice" tick step: 1, 2 or 5 times a power of ten.
inline double tick_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

inline std::string px(double v) { return format_fixed(v, 2); }

inline std::string tick_label(double v, double step) {
    const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
    return format_fixed(v, decimals);
}

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    return colors[i % 6];
}

} // namespace detail

inline std::string render_svg(const Chart& chart) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;

    const double xs = detail::tick_step(x_hi - x_lo, 8);
    const double ys = detail::tick_step(y_hi - y_lo, 6);
    x_lo = std::floor(x_lo / xs) * xs;
    x_hi = std::ceil(x_hi / xs) * xs;
    y_lo = std::floor(y_lo / ys) * ys;
    y_hi = std::ceil(y_hi / ys) * ys;

    const double left = 70, right = chart.width - 170.0, top = 40, bottom = chart.height - 55.0;
    auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (right - left); };
    auto sy = [&](double y) { return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top); };
    using detail::px;

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(chart.width) + "\" height=\"" +
         std::to_string(chart.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + px((left + right) / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         detail::xml_escape(chart.title) + "</text>\n";

    // grid and ticks
    for (double v = x_lo; v <= x_hi + xs / 2; v += xs) {
        const double x = sx(v);
        o += "<line x1=\"" + px(x) + "\" y1=\"" + px(top) + "\" x2=\"" + px(x) + "\" y2=\"" + px(bottom) +
             "\" stroke=\"#e5e5e5\"/>\n";
        o += "<text x=\"" + px(x) + "\" y=\"" + px(bottom + 16) + "\" text-anchor=\"middle\">" +
             detail::tick_label(v, xs) + "</text>\n";
    }
    for (double v = y_lo; v <= y_hi + ys / 2; v += ys) {
        const double y = sy(v);
        o += "<line x1=\"" + px(left) + "\" y1=\"" + px(y) + "\" x2=\"" + px(right) + "\" y2=\"" + px(y) +
             "\" stroke=\"#e5e5e5\"/>\n";
        o += "<text x=\"" + px(left - 6) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" +
             detail::tick_label(v, ys) + "</text>\n";
    }
    o += "<line x1=\"" + px(left) + "\" y1=\"" + px(bottom) + "\" x2=\"" + px(right) + "\" y2=\"" + px(bottom) +
         "\" stroke=\"black\"/>\n";
    o += "<line x1=\"" + px(left) + "\" y1=\"" + px(top) + "\" x2=\"" + px(left) + "\" y2=\"" + px(bottom) +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + px((left + right) / 2) + "\" y=\"" + px(chart.height - 15.0) + "\" text-anchor=\"middle\">" +
         detail::xml_escape(chart.x_label) + "</text>\n";
    o += "<text transform=\"translate(18," + px((top + bottom) / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         detail::xml_escape(chart.y_label) + "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& s = chart.series[k];
        const char* color = detail::palette(k);
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.style == SeriesStyle::line) {
            std::string pts;
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                pts += (pts.empty() ? "" : " ") + px(sx(s.x[i])) + "," + px(sy(s.y[i]));
            }
            o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts +
                 "\"/>\n";
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                o += "<circle cx=\"" + px(sx(s.x[i])) + "\" cy=\"" + px(sy(s.y[i])) + "\" r=\"3.5\" fill=\"" +
                     color + "\"/>\n";
            }
        }
        const double ly = top + 10 + 20.0 * static_cast<double>(k);
        o += "<rect x=\"" + px(right + 15) + "\" y=\"" + px(ly - 6) + "\" width=\"14\" height=\"4\" fill=\"" +
             color + "\"/>\n";
        o += "<text x=\"" + px(right + 35) + "\" y=\"" + px(ly) + "\">" + detail::xml_escape(s.name) + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

} // namespace pensim::io
