#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subnyq/channel.hpp"
#include "subnyq/recovery.hpp"
#include "subnyq/sensing.hpp"

namespace subnyq {

// Estimator arms compared in every experiment.
enum class Arm {
    TraditionalShort,  // M full-rate measurements
    Proposed,          // M recombined + M_e virtual measurements from sub-samples
    BoundLong,         // M + M_e genuine full-rate measurements
};

const char* to_string(Arm arm);
const char* to_string(TapDistribution dist);
const char* to_string(NoiseMode mode);

struct ExperimentConfig {
    int n = 96;
    int m = 32;
    int p = 8;
    std::vector<int> k_list{4};
    std::vector<int> me_list{0, 8, 16, 24, 32, 40, 48, 56};
    std::vector<double> snr_db_list{10.0, 15.0, 20.0};
    TapDistribution dist = TapDistribution::EqualMagnitudeUniform;
    int trials = 500;
    std::uint64_t master_seed = 1;
    NoiseMode noise_mode = NoiseMode::Subsample;
    std::vector<Arm> arms{Arm::TraditionalShort, Arm::Proposed, Arm::BoundLong};
};

// One grid cell with everything fixed except the trial index.
struct TrialSlice {
    int n = 96;
    int m = 32;
    int p = 8;
    int k = 4;
    int me = 0;
    double snr_db = 20.0;
    TapDistribution dist = TapDistribution::EqualMagnitudeUniform;
    NoiseMode noise_mode = NoiseMode::Subsample;
    std::vector<Arm> arms{Arm::TraditionalShort, Arm::Proposed, Arm::BoundLong};
};

struct TrialOutcome {
    Arm arm = Arm::TraditionalShort;
    bool success = false;        // exact support recovery
    double squared_error = 0.0;  // ||h - h_hat||^2
    int trial_index = 0;
};

struct AggregateStats {
    double recovery_probability = 0.0;
    double average_mse = 0.0;  // mean squared_error / N
    double recovery_stderr = 0.0;
    double mse_stderr = 0.0;
    int trials = 0;
};

struct CellKey {
    Arm arm = Arm::TraditionalShort;
    TapDistribution dist = TapDistribution::EqualMagnitudeUniform;
    int k = 0;
    int me = 0;
    double snr_db = 0.0;
};

struct CellResult {
    CellKey key;
    AggregateStats stats;
};

// sigma_n^2 = 10^(-snr/10); +infinity dB gives exactly zero.
double noise_variance_from_snr_db(double snr_db);

// Mean of ||h - estimate||^2 / l over the estimates. Throws on an empty list.
double average_mse(const SparseChannel& h, std::span<const ChannelEstimate> estimates, int l);

// True iff the K largest-magnitude entries of the estimate (ties to the
// smaller index) are all nonzero and their index set equals h.support.
bool support_success(const SparseChannel& h, const ChannelEstimate& est);

// The measurement system one arm sees for a given channel and training
// realization; measurement noise comes from `noise_rng`.
AssembledSystem build_arm_system(Arm arm, const TrialSlice& slice, const SparseChannel& h,
                                 const TrainingSequence& training, double sigma2,
                                 RandomStream& noise_rng);

// Runs every arm of one trial. The trial's random stream is
// trial_stream(master_seed, trial_index); channel, training, and each arm's
// noise use fixed fork labels (0, 1, 2 + arm enum value), so outcomes do not
// depend on the arm list order and the short arms never see M_e.
std::vector<TrialOutcome> run_trial(const TrialSlice& slice, int trial_index,
                                    std::uint64_t master_seed);

// Full sweep over (k, me, snr) with `trials` runs per cell. Trials execute
// in an OpenMP pool (workers <= 0 picks the runtime default); per-trial
// outcomes are buffered and reduced in trial-index order with compensated
// summation, so the table is identical for every worker count. Rows come
// back sorted by (arm, dist, k, snr_db, me).
std::vector<CellResult> run_sweep(const ExperimentConfig& config, int workers = 0);

// Plain single-threaded loop, no OpenMP; the reference the parallel sweep
// is tested against.
std::vector<CellResult> run_sweep_serial(const ExperimentConfig& config);

// Throws std::invalid_argument naming the offending field.
void validate(const ExperimentConfig& config);

}  // namespace subnyq
