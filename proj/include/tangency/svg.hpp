#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tangency {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Axes {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = true;
    bool log_y = true;
};

/// Standalone SVG with one polyline per series, a legend, and the fitted
/// slope in plotted coordinates next to each name. Domain error for no
/// series, a series with fewer than two points, or non-positive data on a
/// log axis.
std::string emit_svg(const std::vector<Series>& series, const Axes& axes);

/// Slope of the series in plotted coordinates.
double plotted_slope(const Series& s, const Axes& axes);

}  // namespace tangency
