// Acceptance gate: nine criteria, one line of output each. Exit code is the
// number of failed criteria. --only N restricts the run to one criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "subnyq/cli_app.hpp"
#include "subnyq/config_io.hpp"
#include "subnyq/evaluation.hpp"
#include "subnyq/recovery.hpp"
#include "subnyq/result_io.hpp"

using namespace subnyq;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSweepSeed = 424242;
constexpr int kSweepTrials = 500;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const CellResult& find_cell(const std::vector<CellResult>& table, Arm arm, int k, int me,
                            double snr) {
    for (const CellResult& cell : table)
        if (cell.key.arm == arm && cell.key.k == k && cell.key.me == me && cell.key.snr_db == snr)
            return cell;
    throw std::runtime_error("acceptance: sweep table is missing a cell");
}

double combined_stderr(const CellResult& a, const CellResult& b, bool mse) {
    const double sa = mse ? a.stats.mse_stderr : a.stats.recovery_stderr;
    const double sb = mse ? b.stats.mse_stderr : b.stats.recovery_stderr;
    return std::sqrt(sa * sa + sb * sb);
}

ExperimentConfig base_sweep_config() {
    ExperimentConfig cfg;
    cfg.trials = kSweepTrials;
    cfg.master_seed = kSweepSeed;
    return cfg;
}

// 500-trial sweeps, computed once and shared between criteria.
const std::vector<CellResult>& uniform_sweep_at(double snr_db) {
    static std::map<double, std::vector<CellResult>> cache;
    auto it = cache.find(snr_db);
    if (it == cache.end()) {
        ExperimentConfig cfg = base_sweep_config();
        cfg.snr_db_list = {snr_db};
        it = cache.emplace(snr_db, run_sweep(cfg)).first;
    }
    return it->second;
}

const std::vector<CellResult>& gaussian_sweep() {
    static std::optional<std::vector<CellResult>> cache;
    if (!cache) {
        ExperimentConfig cfg = base_sweep_config();
        cfg.dist = TapDistribution::Gaussian;
        cfg.me_list = {16, 24, 32, 40, 48, 56};
        cfg.snr_db_list = {20.0};
        cache = run_sweep(cfg);
    }
    return *cache;
}

const std::vector<CellResult>& sparsity_sweep() {
    static std::optional<std::vector<CellResult>> cache;
    if (!cache) {
        ExperimentConfig cfg = base_sweep_config();
        cfg.k_list = {2, 4, 6, 8};
        cfg.me_list = {56};
        cfg.snr_db_list = {20.0};
        cache = run_sweep(cfg);
    }
    return *cache;
}

struct TrialSetup {
    SparseChannel h;
    SensingMatrix x;
};

TrialSetup random_setup(int n, int m, int k, std::uint64_t seed) {
    RandomStream rng(seed);
    TrialSetup s;
    s.h = generate_sparse_channel(n, k, TapDistribution::EqualMagnitudeUniform, rng);
    RandomStream training_rng = rng.fork(1);
    const TrainingSequence seq = generate_training(n, m, training_rng);
    s.x = build_sensing_matrix(seq, m, n);
    return s;
}

// 1. Noiseless recombination and extraction identities at (96, 32, 8, 56).
bool criterion_1(std::string& detail) {
    const double t0 = now_seconds();
    double worst_recombine = 0.0, worst_extract = 0.0;
    for (int i = 0; i < 100; ++i) {
        const TrialSetup s = random_setup(96, 32, 4, 1000 + i);
        RandomStream silent(1);
        const Eigen::VectorXcd full = measure_full_rate(s.x, s.h, 0.0, silent);
        const SubsampleGrid grid = measure_subsampled(s.x, s.h, 8);
        worst_recombine =
            std::max(worst_recombine, (recombine(grid) - full).norm() / full.norm());

        const VirtualMeasurements vm = extract_virtual(grid, s.x, extraction_pattern(32, 8, 56));
        const Eigen::VectorXcd ref = vm.rows * s.h.taps;
        worst_extract = std::max(worst_extract, (vm.values - ref).norm() / ref.norm());
    }
    const double elapsed = now_seconds() - t0;
    detail = "max recombination rel err " + fmt(worst_recombine) + ", max extraction rel err " +
             fmt(worst_extract) + ", " + fmt(elapsed) + " s";
    return worst_recombine < 1e-10 && worst_extract < 1e-10 && elapsed < 5.0;
}

// 2. Exact degenerate reductions: P = 1 equals full rate; M_e = 0 equals the
// plain short-training model.
bool criterion_2(std::string& detail) {
    for (int i = 0; i < 20; ++i) {
        const TrialSetup s = random_setup(96, 32, 4, 2000 + i);
        RandomStream na(3000 + i), nb(3000 + i);
        const Eigen::VectorXcd full = measure_full_rate(s.x, s.h, 0.05, na);
        const SubsampleGrid grid = measure_subsampled(s.x, s.h, 1, 0.05, nb);
        if (recombine(grid) != full) {
            detail = "P = 1 recombined vector differs from the full-rate vector";
            return false;
        }

        RandomStream nc(4000 + i);
        const Eigen::VectorXcd r = measure_full_rate(s.x, s.h, 0.05, nc);
        const AssembledSystem sys = assemble_system(r, Eigen::VectorXcd(0), s.x,
                                                    Eigen::MatrixXcd(0, 96), 0.05,
                                                    NoiseMode::Independent);
        if (sys.measurements != r || sys.matrix != s.x.entries) {
            detail = "M_e = 0 assembled system differs from the plain model";
            return false;
        }
    }
    detail = "20 instances, exact equality";
    return true;
}

// 3. CoSaMP support agrees with the exhaustive oracle on small noiseless
// problems.
bool criterion_3(std::string& detail) {
    const double t0 = now_seconds();
    int agree = 0;
    const int total = 200;
    for (int t = 0; t < total; ++t) {
        RandomStream rng(5000 + t);
        const int n = 8 + static_cast<int>(rng.uniform() * 3.0);
        const int k = 1 + static_cast<int>(rng.uniform() * 2.0);
        const int m = 3 * k + static_cast<int>(rng.uniform() * 3.0);
        const TrainingSequence seq = generate_training(n, m, rng);
        const SensingMatrix x = build_sensing_matrix(seq, m, n);
        const SparseChannel h = generate_sparse_channel(n, k, TapDistribution::Gaussian, rng);
        RandomStream silent = rng.fork(9);
        const Eigen::VectorXcd r = measure_full_rate(x, h, 0.0, silent);
        const AssembledSystem sys = assemble_system(r, Eigen::VectorXcd(0), x,
                                                    Eigen::MatrixXcd(0, n), 0.0,
                                                    NoiseMode::Independent);
        agree += cosamp(sys, {.sparsity = k}).support == exhaustive_oracle(sys, k).support;
    }
    const double elapsed = now_seconds() - t0;
    detail = std::to_string(agree) + "/200 supports agree, " + fmt(elapsed) + " s";
    return agree >= 190 && elapsed < 30.0;
}

// 4. Recovery-vs-length curve shape at K = 4, SNR 20 dB, uniform taps.
bool criterion_4(std::string& detail) {
    const double t0 = now_seconds();
    const std::vector<CellResult>& table = uniform_sweep_at(20.0);
    const double elapsed = now_seconds() - t0;
    const std::vector<int> mes{0, 8, 16, 24, 32, 40, 48, 56};

    bool ok = true;
    std::string why;

    for (std::size_t i = 1; i < mes.size(); ++i) {
        const CellResult& prev = find_cell(table, Arm::Proposed, 4, mes[i - 1], 20.0);
        const CellResult& cur = find_cell(table, Arm::Proposed, 4, mes[i], 20.0);
        const double slack = 2.0 * combined_stderr(prev, cur, false);
        if (cur.stats.recovery_probability <
            prev.stats.recovery_probability - slack) {
            ok = false;
            why += " decrease at me=" + std::to_string(mes[i]);
        }
    }

    const CellResult& prop56 = find_cell(table, Arm::Proposed, 4, 56, 20.0);
    const CellResult& bound56 = find_cell(table, Arm::BoundLong, 4, 56, 20.0);
    const double gap =
        bound56.stats.recovery_probability - prop56.stats.recovery_probability;
    const double gap_allow = 0.05 + 2.0 * combined_stderr(prop56, bound56, false);
    if (gap > gap_allow) {
        ok = false;
        why += " bound gap " + fmt(gap) + " > " + fmt(gap_allow);
    }

    double trad_min = 1.0, trad_max = 0.0, trad_se = 0.0;
    bool trad_exact = true;
    const CellResult& trad0 = find_cell(table, Arm::TraditionalShort, 4, 0, 20.0);
    for (int me : mes) {
        const CellResult& cell = find_cell(table, Arm::TraditionalShort, 4, me, 20.0);
        trad_min = std::min(trad_min, cell.stats.recovery_probability);
        trad_max = std::max(trad_max, cell.stats.recovery_probability);
        trad_se = std::max(trad_se, cell.stats.recovery_stderr);
        trad_exact = trad_exact &&
                     cell.stats.recovery_probability == trad0.stats.recovery_probability &&
                     cell.stats.average_mse == trad0.stats.average_mse;
    }
    if (trad_max - trad_min > 2.0 * trad_se) {
        ok = false;
        why += " traditional arm varies by " + fmt(trad_max - trad_min);
    }

    detail = "proposed " + fmt(find_cell(table, Arm::Proposed, 4, 0, 20.0).stats.recovery_probability) +
             " -> " + fmt(prop56.stats.recovery_probability) + " across me, bound gap " + fmt(gap) +
             ", traditional " + (trad_exact ? "exactly constant" : "constant within tolerance") +
             ", sweep " + fmt(elapsed) + " s";
    if (!ok) detail += ";" + why;
    return ok && elapsed < 600.0;
}

// 5. Uniform-magnitude taps recover at least as often as Gaussian taps.
bool criterion_5(std::string& detail) {
    const std::vector<CellResult>& uni = uniform_sweep_at(20.0);
    const std::vector<CellResult>& gau = gaussian_sweep();

    bool ok = true;
    std::string gaps;
    for (int me : {16, 24, 32, 40, 48, 56}) {
        const CellResult& u = find_cell(uni, Arm::Proposed, 4, me, 20.0);
        const CellResult& g = find_cell(gau, Arm::Proposed, 4, me, 20.0);
        const double slack = 2.0 * combined_stderr(u, g, false);
        if (u.stats.recovery_probability < g.stats.recovery_probability - slack) ok = false;
        gaps += " " + fmt(u.stats.recovery_probability - g.stats.recovery_probability);
    }
    detail = "uniform minus gaussian recovery by me:" + gaps;
    return ok;
}

// 6. Average MSE ordering BoundLong <= Proposed <= TraditionalShort.
bool criterion_6(std::string& detail) {
    bool ok = true;
    std::string why;
    for (double snr : {10.0, 15.0, 20.0}) {
        const std::vector<CellResult>& table = uniform_sweep_at(snr);
        for (int me : {16, 24, 32, 40, 48, 56}) {
            const CellResult& trad = find_cell(table, Arm::TraditionalShort, 4, me, snr);
            const CellResult& prop = find_cell(table, Arm::Proposed, 4, me, snr);
            const CellResult& bound = find_cell(table, Arm::BoundLong, 4, me, snr);
            if (bound.stats.average_mse >
                prop.stats.average_mse + 2.0 * combined_stderr(bound, prop, true)) {
                ok = false;
                why += " bound>proposed at snr=" + fmt(snr) + ",me=" + std::to_string(me);
            }
            if (prop.stats.average_mse >
                trad.stats.average_mse + 2.0 * combined_stderr(prop, trad, true)) {
                ok = false;
                why += " proposed>traditional at snr=" + fmt(snr) + ",me=" + std::to_string(me);
            }
        }
    }
    detail = ok ? "ordering holds at snr 10/15/20 for me >= 16" : "violated:" + why;
    return ok;
}

// 7. Across sparsity levels the proposed arm stays near its bound.
bool criterion_7(std::string& detail) {
    const std::vector<CellResult>& table = sparsity_sweep();
    bool ok = true;
    std::string gaps;
    for (int k : {2, 4, 6, 8}) {
        const CellResult& prop = find_cell(table, Arm::Proposed, k, 56, 20.0);
        const CellResult& bound = find_cell(table, Arm::BoundLong, k, 56, 20.0);
        const double gap =
            bound.stats.recovery_probability - prop.stats.recovery_probability;
        const double allow = 0.1 + 2.0 * combined_stderr(prop, bound, false);
        if (gap > allow) ok = false;
        gaps += " k=" + std::to_string(k) + ":" + fmt(gap);
    }
    detail = "bound gaps" + gaps;
    return ok;
}

// 8. On successful trials at SNR 30 dB the greedy error stays within a
// factor of 2 of the genie least-squares floor on the same system.
bool criterion_8(std::string& detail) {
    TrialSlice slice;
    slice.k = 4;
    slice.me = 56;
    slice.snr_db = 30.0;
    const double sigma2 = noise_variance_from_snr_db(slice.snr_db);

    int successes = 0;
    double greedy_total = 0.0, genie_total = 0.0;
    const int trials = 300;
    for (int t = 0; t < trials; ++t) {
        const RandomStream root = trial_stream(kSweepSeed, static_cast<std::uint64_t>(t));
        RandomStream channel_rng = root.fork(0);
        RandomStream training_rng = root.fork(1);
        const SparseChannel h = generate_sparse_channel(slice.n, slice.k, slice.dist, channel_rng);
        const TrainingSequence training =
            generate_training(slice.n, slice.m + slice.me, training_rng);
        RandomStream noise_rng = root.fork(2 + static_cast<std::uint64_t>(Arm::Proposed));
        const AssembledSystem system =
            build_arm_system(Arm::Proposed, slice, h, training, sigma2, noise_rng);

        const ChannelEstimate est = cosamp(system, {.sparsity = slice.k});
        if (!support_success(h, est)) continue;
        ++successes;
        greedy_total += (h.taps - est.coeffs).squaredNorm();
        genie_total += (h.taps - oracle_ls(system, h.support).coeffs).squaredNorm();
    }

    if (successes < 30) {
        detail = "only " + std::to_string(successes) + "/300 successes; not enough to compare";
        return false;
    }
    const double ratio = greedy_total / genie_total;
    detail = std::to_string(successes) + "/300 successes, error ratio " + fmt(ratio);
    return ratio <= 2.0;
}

// 9. Byte determinism of the CLI artifacts across worker counts.
bool criterion_9(std::string& detail) {
    const fs::path dir = fs::temp_directory_path();
    const fs::path cfg_path = dir / "subnyq_accept.cfg";
    const fs::path csv_1 = dir / "subnyq_accept_w1.csv";
    const fs::path csv_8 = dir / "subnyq_accept_w8.csv";
    const fs::path svg_a = dir / "subnyq_accept_a.svg";
    const fs::path svg_b = dir / "subnyq_accept_b.svg";

    {
        std::ofstream f(cfg_path);
        f << "n = 96\nm = 32\np = 8\nk_list = 4\nme_list = 0, 24, 56\n"
             "snr_db_list = 15\ntrials = 40\nmaster_seed = 7\n";
    }

    const auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream buf;
        buf << f.rdbuf();
        return buf.str();
    };

    std::ostringstream out, err;
    RunOptions run_opt;
    run_opt.config_path = cfg_path.string();
    run_opt.out_path = csv_1.string();
    run_opt.workers = 1;
    if (run_command(run_opt, out, err) != 0) {
        detail = "run failed: " + err.str();
        return false;
    }
    run_opt.out_path = csv_8.string();
    run_opt.workers = 8;
    if (run_command(run_opt, out, err) != 0) {
        detail = "run failed: " + err.str();
        return false;
    }
    const bool csv_same = slurp(csv_1) == slurp(csv_8);

    PlotOptions plot_opt;
    plot_opt.csv_path = csv_1.string();
    plot_opt.metric = PlotMetric::AvgMse;
    plot_opt.out_path = svg_a.string();
    const bool plot_a = plot_command(plot_opt, out, err) == 0;
    plot_opt.out_path = svg_b.string();
    const bool plot_b = plot_command(plot_opt, out, err) == 0;
    const bool svg_same = plot_a && plot_b && slurp(svg_a) == slurp(svg_b);

    for (const fs::path& p : {cfg_path, csv_1, csv_8, svg_a, svg_b}) fs::remove(p);

    detail = std::string("csv 1-vs-8 workers ") + (csv_same ? "identical" : "DIFFER") +
             ", svg repeat " + (svg_same ? "identical" : "DIFFER");
    return csv_same && svg_same;
}

struct Criterion {
    int id;
    const char* name;
    bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "noiseless structural identities", criterion_1},
    {2, "degenerate reductions", criterion_2},
    {3, "oracle equivalence", criterion_3},
    {4, "recovery curve shape vs extracted length", criterion_4},
    {5, "uniform taps recover easier than gaussian taps", criterion_5},
    {6, "average mse ordering across arms", criterion_6},
    {7, "sparsity stability near the bound", criterion_7},
    {8, "genie error floor on successful trials", criterion_8},
    {9, "byte determinism of csv and svg", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        const double t0 = now_seconds();
        std::string detail;
        bool passed = false;
        try {
            passed = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed = now_seconds() - t0;
        std::printf("[%s] %d %s (%.1f s): %s\n", passed ? "PASS" : "FAIL", c.id, c.name, elapsed,
                    detail.c_str());
        std::fflush(stdout);
        failures += !passed;
    }
    return failures;
}
