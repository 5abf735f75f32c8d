#include "subnyq/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subnyq {

namespace {

// Fork labels of the per-trial stream. Arm noise labels are tied to the enum
// value, never to the position in the arms list.
constexpr std::uint64_t kChannelLabel = 0;
constexpr std::uint64_t kTrainingLabel = 1;
constexpr std::uint64_t kNoiseLabelBase = 2;

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

std::string arm_sort_key(Arm arm) { return to_string(arm); }

AggregateStats aggregate(std::span<const TrialOutcome> outcomes, int l) {
    AggregateStats stats;
    stats.trials = static_cast<int>(outcomes.size());
    if (stats.trials == 0) return stats;

    KahanSum successes;
    KahanSum se_sum;
    for (const TrialOutcome& o : outcomes) {
        successes.add(o.success ? 1.0 : 0.0);
        se_sum.add(o.squared_error / static_cast<double>(l));
    }
    const double t = static_cast<double>(stats.trials);
    stats.recovery_probability = successes.sum / t;
    stats.average_mse = se_sum.sum / t;
    stats.recovery_stderr =
        std::sqrt(stats.recovery_probability * (1.0 - stats.recovery_probability) / t);

    if (stats.trials > 1) {
        KahanSum sq_dev;
        for (const TrialOutcome& o : outcomes) {
            const double d = o.squared_error / static_cast<double>(l) - stats.average_mse;
            sq_dev.add(d * d);
        }
        stats.mse_stderr = std::sqrt(sq_dev.sum / (t - 1.0) / t);
    }
    return stats;
}

struct Cell {
    int k;
    int me;
    double snr_db;
};

std::vector<Cell> grid_cells(const ExperimentConfig& config) {
    std::vector<Cell> cells;
    for (int k : config.k_list)
        for (int me : config.me_list)
            for (double snr : config.snr_db_list) cells.push_back({k, me, snr});
    return cells;
}

TrialSlice slice_for(const ExperimentConfig& config, const Cell& cell) {
    TrialSlice slice;
    slice.n = config.n;
    slice.m = config.m;
    slice.p = config.p;
    slice.k = cell.k;
    slice.me = cell.me;
    slice.snr_db = cell.snr_db;
    slice.dist = config.dist;
    slice.noise_mode = config.noise_mode;
    slice.arms = config.arms;
    return slice;
}

std::vector<CellResult> reduce_cells(const ExperimentConfig& config, std::span<const Cell> cells,
                                     std::span<const std::vector<TrialOutcome>> buffers) {
    std::vector<CellResult> table;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (Arm arm : config.arms) {
            std::vector<TrialOutcome> per_arm;
            per_arm.reserve(static_cast<std::size_t>(config.trials));
            for (int t = 0; t < config.trials; ++t) {
                const auto& trial = buffers[c * static_cast<std::size_t>(config.trials) +
                                            static_cast<std::size_t>(t)];
                for (const TrialOutcome& o : trial)
                    if (o.arm == arm) per_arm.push_back(o);
            }
            CellResult row;
            row.key = {arm, config.dist, cells[c].k, cells[c].me, cells[c].snr_db};
            row.stats = aggregate(per_arm, config.n);
            table.push_back(std::move(row));
        }
    }
    std::sort(table.begin(), table.end(), [](const CellResult& a, const CellResult& b) {
        return std::make_tuple(arm_sort_key(a.key.arm), std::string(to_string(a.key.dist)), a.key.k,
                               a.key.snr_db, a.key.me) <
               std::make_tuple(arm_sort_key(b.key.arm), std::string(to_string(b.key.dist)), b.key.k,
                               b.key.snr_db, b.key.me);
    });
    return table;
}

}  // namespace

const char* to_string(Arm arm) {
    switch (arm) {
        case Arm::TraditionalShort: return "TraditionalShort";
        case Arm::Proposed: return "Proposed";
        case Arm::BoundLong: return "BoundLong";
    }
    return "?";
}

const char* to_string(TapDistribution dist) {
    return dist == TapDistribution::EqualMagnitudeUniform ? "uniform" : "gaussian";
}

const char* to_string(NoiseMode mode) {
    return mode == NoiseMode::Subsample ? "Subsample" : "Independent";
}

double noise_variance_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

double average_mse(const SparseChannel& h, std::span<const ChannelEstimate> estimates, int l) {
    if (l < 1) throw std::invalid_argument("average_mse: divisor l must be positive");
    if (estimates.empty()) throw std::invalid_argument("average_mse: empty estimate list");
    KahanSum acc;
    for (const ChannelEstimate& est : estimates)
        acc.add((h.taps - est.coeffs).squaredNorm() / static_cast<double>(l));
    return acc.sum / static_cast<double>(estimates.size());
}

bool support_success(const SparseChannel& h, const ChannelEstimate& est) {
    const int k = h.sparsity();
    if (k == 0) return est.support.empty();
    if (est.coeffs.size() != h.taps.size()) return false;

    std::vector<int> idx(est.coeffs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
        const double ma = std::abs(est.coeffs[a]), mb = std::abs(est.coeffs[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    idx.resize(k);
    // A zero entry among the selected "dominant" taps means the estimate has
    // fewer than K taps at all; that never counts as recovery.
    for (int i : idx)
        if (est.coeffs[i] == std::complex<double>(0.0, 0.0)) return false;
    std::sort(idx.begin(), idx.end());
    return idx == h.support;
}

AssembledSystem build_arm_system(Arm arm, const TrialSlice& slice, const SparseChannel& h,
                                 const TrainingSequence& training, double sigma2,
                                 RandomStream& noise_rng) {
    const Eigen::VectorXcd empty_r;
    const Eigen::MatrixXcd empty_x(0, 0);

    switch (arm) {
        case Arm::TraditionalShort: {
            const SensingMatrix x = build_sensing_matrix(training, slice.m, slice.n);
            const Eigen::VectorXcd r = measure_full_rate(x, h, sigma2, noise_rng);
            return assemble_system(r, empty_r, x, empty_x, sigma2, NoiseMode::Independent);
        }
        case Arm::BoundLong: {
            const SensingMatrix x = build_sensing_matrix(training, slice.m + slice.me, slice.n);
            const Eigen::VectorXcd r = measure_full_rate(x, h, sigma2, noise_rng);
            return assemble_system(r, empty_r, x, empty_x, sigma2, NoiseMode::Independent);
        }
        case Arm::Proposed: {
            const SensingMatrix x = build_sensing_matrix(training, slice.m, slice.n);
            const ExtractionPattern pattern = extraction_pattern(slice.m, slice.p, slice.me);
            if (slice.noise_mode == NoiseMode::Subsample) {
                const SubsampleGrid grid = measure_subsampled(x, h, slice.p, sigma2, noise_rng);
                const Eigen::VectorXcd r = recombine(grid);
                const VirtualMeasurements v = extract_virtual(grid, x, pattern);
                return assemble_system(r, v.values, x, v.rows, sigma2, NoiseMode::Subsample);
            }
            const Eigen::VectorXcd r = measure_full_rate(x, h, sigma2, noise_rng);
            const SubsampleGrid noiseless = measure_subsampled(x, h, slice.p);
            VirtualMeasurements v = extract_virtual(noiseless, x, pattern);
            for (Eigen::Index e = 0; e < v.values.size(); ++e)
                v.values[e] += noise_rng.complex_gaussian(sigma2);
            return assemble_system(r, v.values, x, v.rows, sigma2, NoiseMode::Independent);
        }
    }
    throw std::invalid_argument("build_arm_system: unknown arm");
}

std::vector<TrialOutcome> run_trial(const TrialSlice& slice, int trial_index,
                                    std::uint64_t master_seed) {
    const RandomStream root = trial_stream(master_seed, static_cast<std::uint64_t>(trial_index));
    RandomStream channel_rng = root.fork(kChannelLabel);
    RandomStream training_rng = root.fork(kTrainingLabel);

    const SparseChannel h = generate_sparse_channel(slice.n, slice.k, slice.dist, channel_rng);
    const TrainingSequence training = generate_training(slice.n, slice.m + slice.me, training_rng);
    const double sigma2 = noise_variance_from_snr_db(slice.snr_db);

    std::vector<TrialOutcome> outcomes;
    outcomes.reserve(slice.arms.size());
    for (Arm arm : slice.arms) {
        RandomStream noise_rng = root.fork(kNoiseLabelBase + static_cast<std::uint64_t>(arm));
        const AssembledSystem system = build_arm_system(arm, slice, h, training, sigma2, noise_rng);
        RecoveryConfig rc;
        rc.sparsity = slice.k;
        const ChannelEstimate est = cosamp(system, rc);

        TrialOutcome o;
        o.arm = arm;
        o.success = support_success(h, est);
        o.squared_error = (h.taps - est.coeffs).squaredNorm();
        o.trial_index = trial_index;
        outcomes.push_back(o);
    }
    return outcomes;
}

void validate(const ExperimentConfig& config) {
    if (config.n < 1) throw std::invalid_argument("n: must be positive");
    if (config.m < 1) throw std::invalid_argument("m: must be positive");
    if (config.p < 1 || config.n % config.p != 0)
        throw std::invalid_argument("p: must be positive and divide n");
    if (config.trials < 1) throw std::invalid_argument("trials: must be at least 1");
    if (config.k_list.empty()) throw std::invalid_argument("k_list: must not be empty");
    for (int k : config.k_list)
        if (k < 1 || k > config.n) throw std::invalid_argument("k_list: entries must satisfy 1 <= k <= n");
    if (config.me_list.empty()) throw std::invalid_argument("me_list: must not be empty");
    int me_max = 0;
    for (int me : config.me_list) {
        if (me < 0) throw std::invalid_argument("me_list: entries must be nonnegative");
        me_max = std::max(me_max, me);
    }
    if (me_max > 0) {
        try {
            extraction_pattern(config.m, config.p, me_max);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("me_list: largest entry exceeds the extraction pattern capacity");
        }
    }
    if (config.snr_db_list.empty()) throw std::invalid_argument("snr_db_list: must not be empty");
    if (config.arms.empty()) throw std::invalid_argument("arms: must not be empty");
}

std::vector<CellResult> run_sweep(const ExperimentConfig& config, int workers) {
    validate(config);
    const std::vector<Cell> cells = grid_cells(config);
    const std::size_t jobs = cells.size() * static_cast<std::size_t>(config.trials);
    std::vector<std::vector<TrialOutcome>> buffers(jobs);

#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#else
    const int threads = 1;
    (void)workers;
#endif
    bool failed = false;
    std::string failure;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(jobs); ++j) {
        const std::size_t cell_idx = static_cast<std::size_t>(j) / static_cast<std::size_t>(config.trials);
        const int trial = static_cast<int>(static_cast<std::size_t>(j) % static_cast<std::size_t>(config.trials));
        try {
            const TrialSlice slice = slice_for(config, cells[cell_idx]);
            buffers[static_cast<std::size_t>(j)] = run_trial(slice, trial, config.master_seed);
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    (void)threads;
    if (failed) throw std::runtime_error("run_sweep: trial failed: " + failure);
    return reduce_cells(config, cells, buffers);
}

std::vector<CellResult> run_sweep_serial(const ExperimentConfig& config) {
    validate(config);
    const std::vector<Cell> cells = grid_cells(config);
    std::vector<std::vector<TrialOutcome>> buffers;
    buffers.reserve(cells.size() * static_cast<std::size_t>(config.trials));
    for (const Cell& cell : cells) {
        const TrialSlice slice = slice_for(config, cell);
        for (int t = 0; t < config.trials; ++t)
            buffers.push_back(run_trial(slice, t, config.master_seed));
    }
    return reduce_cells(config, cells, buffers);
}

}  // namespace subnyq
