#include "subnyq/config_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace subnyq {

namespace {

[[noreturn]] void fail_key(const std::string& key, const std::string& what) {
    throw std::runtime_error("config key '" + key + "': " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_scalar(std::string_view v, const std::string& key) {
    T value{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
    if (ec != std::errc() || ptr != v.data() + v.size())
        fail_key(key, "invalid value '" + std::string(v) + "'");
    return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view v, const std::string& key) {
    std::vector<T> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const std::size_t comma = v.find(',', start);
        const std::string_view item =
            trim(comma == std::string_view::npos ? v.substr(start) : v.substr(start, comma - start));
        if (item.empty()) fail_key(key, "empty list element");
        out.push_back(parse_scalar<T>(item, key));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) fail_key(key, "empty list");
    return out;
}

TapDistribution parse_dist(std::string_view v, const std::string& key) {
    if (v == "uniform" || v == "EqualMagnitudeUniform") return TapDistribution::EqualMagnitudeUniform;
    if (v == "gaussian" || v == "Gaussian") return TapDistribution::Gaussian;
    fail_key(key, "expected 'uniform' or 'gaussian', got '" + std::string(v) + "'");
}

NoiseMode parse_mode(std::string_view v, const std::string& key) {
    if (v == "subsample" || v == "Subsample") return NoiseMode::Subsample;
    if (v == "independent" || v == "Independent") return NoiseMode::Independent;
    fail_key(key, "expected 'Subsample' or 'Independent', got '" + std::string(v) + "'");
}

Arm parse_arm(std::string_view v, const std::string& key) {
    if (v == "TraditionalShort") return Arm::TraditionalShort;
    if (v == "Proposed") return Arm::Proposed;
    if (v == "BoundLong") return Arm::BoundLong;
    fail_key(key, "unknown arm '" + std::string(v) + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
    ExperimentConfig config;
    std::set<std::string> seen;

    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error("config line '" + std::string(line) + "': expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("config: missing key before '='");
        if (value.empty()) fail_key(key, "missing value");
        if (!seen.insert(key).second) fail_key(key, "duplicate assignment");

        if (key == "n") {
            config.n = parse_scalar<int>(value, key);
        } else if (key == "m") {
            config.m = parse_scalar<int>(value, key);
        } else if (key == "p") {
            config.p = parse_scalar<int>(value, key);
        } else if (key == "k_list") {
            config.k_list = parse_list<int>(value, key);
        } else if (key == "me_list") {
            config.me_list = parse_list<int>(value, key);
        } else if (key == "snr_db_list") {
            config.snr_db_list = parse_list<double>(value, key);
        } else if (key == "dist") {
            config.dist = parse_dist(value, key);
        } else if (key == "trials") {
            config.trials = parse_scalar<int>(value, key);
        } else if (key == "master_seed") {
            config.master_seed = parse_scalar<std::uint64_t>(value, key);
        } else if (key == "noise_mode") {
            config.noise_mode = parse_mode(value, key);
        } else if (key == "arms") {
            config.arms.clear();
            std::size_t start = 0;
            const std::string_view v = value;
            while (start <= v.size()) {
                const std::size_t comma = v.find(',', start);
                const std::string_view item = trim(
                    comma == std::string_view::npos ? v.substr(start) : v.substr(start, comma - start));
                if (item.empty()) fail_key(key, "empty list element");
                config.arms.push_back(parse_arm(item, key));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
        } else {
            throw std::runtime_error("config key '" + key + "': unknown key");
        }
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("config: cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

}  // namespace subnyq
