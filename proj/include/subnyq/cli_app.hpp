#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "subnyq/svg_plot.hpp"

namespace subnyq {

struct RunOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> workers;
};

struct PlotOptions {
    std::string csv_path;
    std::string out_path;
    PlotMetric metric = PlotMetric::RecoveryProb;
};

// Both return a process exit code. Success prints the output path (and, for
// run, the cell count) to `out`; failures print a single-line diagnostic to
// `err` and write no output file.
int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err);
int plot_command(const PlotOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace subnyq
