#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "srwe/numeric.hpp"

namespace srwe {

struct ChartSeries {
    std::string label;
    Vector x;
    Vector y;
};

enum class ChartKind { kLine, kBar };

/// Static presentation-only chart: axes, ticks, series, legend. No data
/// processing beyond linear scaling into the viewport.
void write_chart_svg(const std::filesystem::path& path, ChartKind kind, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<ChartSeries>& series);

}  // namespace srwe
