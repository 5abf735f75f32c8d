#include "subnyq/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace subnyq {

namespace {

constexpr double kWidth = 880.0, kHeight = 560.0;
constexpr double kLeft = 72.0, kRight = 640.0;   // plot area x range
constexpr double kTop = 48.0, kBottom = 500.0;   // plot area y range
constexpr double kMseFloor = 1e-30;

struct SeriesKey {
    std::string arm;
    std::string dist;
    int k;
    double snr_db;

    bool operator<(const SeriesKey& o) const {
        return std::tie(arm, dist, k, snr_db) < std::tie(o.arm, o.dist, o.k, o.snr_db);
    }
};

struct Series {
    SeriesKey key;
    std::vector<std::pair<double, double>> points;  // (me, metric)
};

std::string num(double v) {
    std::array<char, 64> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                         std::chars_format::fixed, 2);
    if (ec != std::errc()) throw std::runtime_error("svg: number formatting failed");
    return std::string(buf.data(), ptr);
}

const char* arm_color(const std::string& arm) {
    if (arm == "TraditionalShort") return "#d62728";
    if (arm == "Proposed") return "#1f77b4";
    if (arm == "BoundLong") return "#2ca02c";
    return "#9467bd";
}

const char* dash_for(int variant) {
    static constexpr std::array<const char*, 4> kDashes = {"", "7,4", "2,3", "10,3,2,3"};
    return kDashes[static_cast<std::size_t>(variant) % kDashes.size()];
}

}  // namespace

std::string render_plot_svg(std::span<const ResultRow> rows, PlotMetric metric) {
    if (rows.empty()) throw std::invalid_argument("render_plot_svg: no data rows");

    const bool log_y = metric == PlotMetric::AvgMse;
    std::map<SeriesKey, std::vector<std::pair<double, double>>> grouped;
    for (const ResultRow& r : rows) {
        double v = metric == PlotMetric::RecoveryProb ? r.recovery_prob : r.avg_mse;
        if (log_y && v <= 0.0) v = kMseFloor;
        grouped[{r.arm, r.dist, r.k, r.snr_db}].emplace_back(static_cast<double>(r.me), v);
    }
    std::vector<Series> series;
    for (auto& [key, pts] : grouped) {
        std::sort(pts.begin(), pts.end());
        series.push_back({key, std::move(pts)});
    }

    double x_min = series[0].points[0].first, x_max = x_min;
    double v_min = series[0].points[0].second, v_max = v_min;
    for (const Series& s : series)
        for (const auto& [x, v] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            v_min = std::min(v_min, v);
            v_max = std::max(v_max, v);
        }
    if (x_min == x_max) {
        x_min -= 1.0;
        x_max += 1.0;
    }

    double y_lo, y_hi;  // y domain in plot units (log10 for the MSE axis)
    if (log_y) {
        y_lo = std::floor(std::log10(v_min));
        y_hi = std::ceil(std::log10(v_max));
        if (y_lo == y_hi) {
            y_lo -= 1.0;
            y_hi += 1.0;
        }
    } else {
        y_lo = 0.0;
        y_hi = 1.0;
    }

    const auto x_px = [&](double x) {
        return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
    };
    const auto y_px = [&](double v) {
        const double t = log_y ? std::log10(v) : v;
        return kBottom - (t - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" fill=\"white\"/>\n";

    const std::string title =
        metric == PlotMetric::RecoveryProb ? "Recovery probability" : "Average MSE";
    svg += "<text x=\"" + num((kLeft + kRight) / 2.0) + "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"16\" text-anchor=\"middle\">" + title +
           " vs extracted training length</text>\n";

    // gridlines and y tick labels
    const int y_ticks = log_y ? static_cast<int>(y_hi - y_lo) : 5;
    for (int i = 0; i <= y_ticks; ++i) {
        const double t = y_lo + (y_hi - y_lo) * static_cast<double>(i) / y_ticks;
        const double py = kBottom - (t - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
        svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kRight) +
               "\" y2=\"" + num(py) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        std::string label;
        if (log_y) {
            label = "1e" + std::to_string(static_cast<long>(t));
        } else {
            label = format_double(t);
        }
        svg += "<text x=\"" + num(kLeft - 8.0) + "\" y=\"" + num(py + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" + label +
               "</text>\n";
    }

    // x ticks at each distinct length
    std::vector<double> xs;
    for (const Series& s : series)
        for (const auto& [x, v] : s.points) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs) {
        const double px = x_px(x);
        svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(px) +
               "\" y2=\"" + num(kBottom + 5.0) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + num(px) + "\" y=\"" + num(kBottom + 20.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
               format_double(x) + "</text>\n";
    }

    // axes
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(kBottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(kRight) +
           "\" y2=\"" + num(kBottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num((kLeft + kRight) / 2.0) + "\" y=\"" + num(kBottom + 42.0) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">extracted "
           "training length</text>\n";

    // series polylines, markers, legend
    std::map<std::string, int> variant_within_arm;
    double legend_y = kTop + 10.0;
    for (const Series& s : series) {
        const int variant = variant_within_arm[s.key.arm]++;
        const char* color = arm_color(s.key.arm);
        const char* dash = dash_for(variant);

        std::string points;
        for (const auto& [x, v] : s.points) {
            if (!points.empty()) points += ' ';
            points += num(x_px(x)) + "," + num(y_px(v));
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.8\"";
        if (dash[0] != '\0') svg += std::string(" stroke-dasharray=\"") + dash + "\"";
        svg += " points=\"" + points + "\"/>\n";
        for (const auto& [x, v] : s.points)
            svg += "<circle cx=\"" + num(x_px(x)) + "\" cy=\"" + num(y_px(v)) + "\" r=\"3\" fill=\"" +
                   color + "\"/>\n";

        const std::string label = s.key.arm + " " + s.key.dist + " k=" + std::to_string(s.key.k) +
                                  " snr=" + format_double(s.key.snr_db) + "dB";
        svg += "<line x1=\"" + num(kRight + 16.0) + "\" y1=\"" + num(legend_y) + "\" x2=\"" +
               num(kRight + 44.0) + "\" y2=\"" + num(legend_y) + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.8\"";
        if (dash[0] != '\0') svg += std::string(" stroke-dasharray=\"") + dash + "\"";
        svg += "/>\n";
        svg += "<text x=\"" + num(kRight + 50.0) + "\" y=\"" + num(legend_y + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + label + "</text>\n";
        legend_y += 18.0;
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace subnyq
