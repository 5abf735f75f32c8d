#include "subnyq/result_io.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace subnyq {

namespace {

constexpr std::string_view kHeader =
    "arm,dist,n,m,p,k,me,snr_db,trials,recovery_prob,avg_mse,recovery_stderr,mse_stderr,seed";

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* column) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        fail(line_no, std::string("invalid ") + column + " value '" + std::string(field) + "'");
    return value;
}

bool known_arm(std::string_view s) {
    return s == "TraditionalShort" || s == "Proposed" || s == "BoundLong";
}

bool known_dist(std::string_view s) { return s == "uniform" || s == "gaussian"; }

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

std::vector<ResultRow> rows_from_sweep(const ExperimentConfig& config,
                                       std::span<const CellResult> results) {
    std::vector<ResultRow> rows;
    rows.reserve(results.size());
    for (const CellResult& cell : results) {
        ResultRow row;
        row.arm = to_string(cell.key.arm);
        row.dist = to_string(cell.key.dist);
        row.n = config.n;
        row.m = config.m;
        row.p = config.p;
        row.k = cell.key.k;
        row.me = cell.key.me;
        row.snr_db = cell.key.snr_db;
        row.trials = cell.stats.trials;
        row.recovery_prob = cell.stats.recovery_probability;
        row.avg_mse = cell.stats.average_mse;
        row.recovery_stderr = cell.stats.recovery_stderr;
        row.mse_stderr = cell.stats.mse_stderr;
        row.seed = config.master_seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_csv(std::span<const ResultRow> rows) {
    std::string out(kHeader);
    out += '\n';
    for (const ResultRow& r : rows) {
        out += r.arm;
        out += ',';
        out += r.dist;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.m);
        out += ',';
        out += std::to_string(r.p);
        out += ',';
        out += std::to_string(r.k);
        out += ',';
        out += std::to_string(r.me);
        out += ',';
        out += format_double(r.snr_db);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += format_double(r.recovery_prob);
        out += ',';
        out += format_double(r.avg_mse);
        out += ',';
        out += format_double(r.recovery_stderr);
        out += ',';
        out += format_double(r.mse_stderr);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
    std::vector<ResultRow> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (nl == std::string_view::npos) break;
            fail(line_no, "empty line");
        }
        if (!header_seen) {
            if (line != kHeader) fail(line_no, "header does not match the result schema");
            header_seen = true;
            continue;
        }
        const std::vector<std::string_view> f = split_fields(line);
        if (f.size() != 14)
            fail(line_no, "expected 14 columns, got " + std::to_string(f.size()));
        ResultRow row;
        if (!known_arm(f[0])) fail(line_no, "unknown arm '" + std::string(f[0]) + "'");
        row.arm = std::string(f[0]);
        if (!known_dist(f[1])) fail(line_no, "unknown dist '" + std::string(f[1]) + "'");
        row.dist = std::string(f[1]);
        row.n = parse_number<int>(f[2], line_no, "n");
        row.m = parse_number<int>(f[3], line_no, "m");
        row.p = parse_number<int>(f[4], line_no, "p");
        row.k = parse_number<int>(f[5], line_no, "k");
        row.me = parse_number<int>(f[6], line_no, "me");
        row.snr_db = parse_number<double>(f[7], line_no, "snr_db");
        row.trials = parse_number<int>(f[8], line_no, "trials");
        row.recovery_prob = parse_number<double>(f[9], line_no, "recovery_prob");
        row.avg_mse = parse_number<double>(f[10], line_no, "avg_mse");
        row.recovery_stderr = parse_number<double>(f[11], line_no, "recovery_stderr");
        row.mse_stderr = parse_number<double>(f[12], line_no, "mse_stderr");
        row.seed = parse_number<std::uint64_t>(f[13], line_no, "seed");
        rows.push_back(std::move(row));
    }
    if (!header_seen) fail(1, "missing header");
    return rows;
}

}  // namespace subnyq
