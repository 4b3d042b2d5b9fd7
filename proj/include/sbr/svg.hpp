#pragma once

#include <string>
#include <vector>

namespace sbr {

/// Minimal static SVG line chart with +-1 standard-error bars.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yerr; ///< may be empty
};

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series);

} // namespace sbr
