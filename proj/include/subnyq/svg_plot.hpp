#pragma once

#include <span>
#include <string>

#include "subnyq/result_io.hpp"

namespace subnyq {

enum class PlotMetric { RecoveryProb, AvgMse };

// Renders one line chart: x = extracted length, y = the chosen metric, one
// polyline per (arm, dist, k, snr) series. The MSE metric uses a base-10
// log axis (values at or below zero are clamped to 1e-30). Output is plain
// text with no timestamps or generated ids, so equal inputs give equal
// bytes. Throws std::invalid_argument when rows is empty.
std::string render_plot_svg(std::span<const ResultRow> rows, PlotMetric metric);

}  // namespace subnyq
