#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subnyq/evaluation.hpp"

namespace subnyq {

// One CSV record per (arm, dist, k, me, snr) cell. Column order is fixed:
// arm,dist,n,m,p,k,me,snr_db,trials,recovery_prob,avg_mse,recovery_stderr,mse_stderr,seed
struct ResultRow {
    std::string arm;
    std::string dist;
    int n = 0;
    int m = 0;
    int p = 0;
    int k = 0;
    int me = 0;
    double snr_db = 0.0;
    int trials = 0;
    double recovery_prob = 0.0;
    double avg_mse = 0.0;
    double recovery_stderr = 0.0;
    double mse_stderr = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const ResultRow&) const = default;
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

std::vector<ResultRow> rows_from_sweep(const ExperimentConfig& config,
                                       std::span<const CellResult> results);

// Header plus one line per row, '\n' terminated. Numbers round-trip exactly.
std::string render_csv(std::span<const ResultRow> rows);

// Strict inverse of render_csv. Throws std::runtime_error whose message
// starts with "line N:" for the first offending line.
std::vector<ResultRow> parse_csv(std::string_view text);

}  // namespace subnyq
