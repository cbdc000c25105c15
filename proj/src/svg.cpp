#include "tangency/svg.hpp"

#include "tangency/error.hpp"
#include "tangency/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

namespace tangency {

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 80, kRight = 180, kTop = 40, kBottom = 60;
constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

double axis_value(double v, bool log_axis) {
    if (log_axis) {
        if (!(v > 0.0)) fail(ErrorCode::Domain, fmt::format("non-positive value {} on a log axis", v));
        return std::log10(v);
    }
    return v;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

double plotted_slope(const Series& s, const Axes& axes) {
    if (s.points.size() < 2) fail(ErrorCode::Domain, fmt::format("series '{}' needs at least two points", s.name));
    std::vector<double> x, y;
    for (const auto& [px, py] : s.points) {
        x.push_back(axis_value(px, axes.log_x));
        y.push_back(axis_value(py, axes.log_y));
    }
    return fit_line(x, y).slope;
}

std::string emit_svg(const std::vector<Series>& series, const Axes& axes) {
    if (series.empty()) fail(ErrorCode::Domain, "no series to plot");
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    std::vector<double> slopes;
    for (const auto& s : series) {
        slopes.push_back(plotted_slope(s, axes));
        for (const auto& [px, py] : s.points) {
            const double ax = axis_value(px, axes.log_x), ay = axis_value(py, axes.log_y);
            xmin = std::min(xmin, ax);
            xmax = std::max(xmax, ax);
            ymin = std::min(ymin, ay);
            ymax = std::max(ymax, ay);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * ph; };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n"
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        kWidth, kHeight, kWidth, kHeight, kLeft, escape(axes.title), kLeft, kTop, pw, ph);
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double vx = xmin + (xmax - xmin) * i / ticks;
        const double vy = ymin + (ymax - ymin) * i / ticks;
        const std::string lx = axes.log_x ? fmt::format("{:.3g}", std::pow(10.0, vx)) : fmt::format("{:.3g}", vx);
        const std::string ly = axes.log_y ? fmt::format("{:.3g}", std::pow(10.0, vy)) : fmt::format("{:.3g}", vy);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\" "
                           "text-anchor=\"middle\">{}</text>\n",
                           sx(vx), kTop + ph + 16, lx);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\" "
                           "text-anchor=\"end\">{}</text>\n",
                           kLeft - 6, sy(vy) + 3, ly);
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\">{}</text>\n",
                       kLeft + pw / 2, kHeight - 18, escape(axes.x_label));
    out += fmt::format("<text x=\"16\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "transform=\"rotate(-90 16 {:.1f})\" text-anchor=\"middle\">{}</text>\n",
                       kTop + ph / 2, kTop + ph / 2, escape(axes.y_label));
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kColors[i % kColors.size()];
        std::string pts;
        for (const auto& [px, py] : s.points)
            pts += fmt::format("{:.2f},{:.2f} ", sx(axis_value(px, axes.log_x)), sy(axis_value(py, axes.log_y)));
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
        const double ly = kTop + 16 + 20.0 * static_cast<double>(i);
        out += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           kLeft + pw + 12, ly - 4, kLeft + pw + 32, ly - 4, color);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\">{} "
                           "(slope {:.2f})</text>\n",
                           kLeft + pw + 38, ly, escape(s.name), slopes[i]);
    }
    out += "</svg>\n";
    return out;
}

}  // namespace tangency
