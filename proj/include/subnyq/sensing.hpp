#pragma once

#include <Eigen/Dense>

#include "subnyq/channel.hpp"
#include "subnyq/rng.hpp"

namespace subnyq {

// Training symbol sequence serving every sensing matrix of a trial.
// symbols[0..n+m_max-2] are i.i.d. unit-variance circular complex Gaussian.
struct TrainingSequence {
    Eigen::VectorXcd symbols;  // length n + m_max - 1
    int n = 0;                 // channel length the sequence is built for
    int m_max = 0;             // largest row count it can serve
};

// M x N convolution window over the training sequence.
// entries(r, c) = symbols[n + r - c - 1] (0-based), so row 0 reads
// [x_{n-1}, x_{n-2}, ..., x_0] and diagonals are constant.
struct SensingMatrix {
    Eigen::MatrixXcd entries;

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
};

// M x P grid of block partial inner products, one column per ADC branch.
// Column p covers tap indices [p*block_len, (p+1)*block_len).
struct SubsampleGrid {
    Eigen::MatrixXcd values;             // M x P
    int block_len = 0;                   // N / P
    double noise_variance_per_cell = 0;  // sigma^2 / P

    int rows() const { return static_cast<int>(values.rows()); }
    int branches() const { return static_cast<int>(values.cols()); }
};

// Source-row table for virtual measurements: virtual row e sums grid cells
// (source_rows(e, p), p) over the branches p.
struct ExtractionPattern {
    Eigen::MatrixXi source_rows;  // m_e x P, 0-based rows into the grid
    int m = 0;                    // row count of the grid it indexes

    int count() const { return static_cast<int>(source_rows.rows()); }
};

// Virtual measurement vector and the matching rows of the equivalent
// training matrix.
struct VirtualMeasurements {
    Eigen::VectorXcd values;  // length m_e
    Eigen::MatrixXcd rows;    // m_e x N
};

enum class NoiseMode {
    Subsample,    // noise entered per sub-sample cell; recombined and
                  // virtual measurements share (correlated) noise
    Independent,  // fresh i.i.d. noise per assembled measurement
};

// Stacked linear system: measurements = matrix * h + noise.
struct AssembledSystem {
    Eigen::VectorXcd measurements;  // length M + M_e
    Eigen::MatrixXcd matrix;        // (M + M_e) x N
    double noise_variance = 0.0;    // marginal per-measurement variance
    NoiseMode noise_mode = NoiseMode::Subsample;

    int rows() const { return static_cast<int>(matrix.rows()); }
    int cols() const { return static_cast<int>(matrix.cols()); }
};

// Draws n + m_max - 1 unit-variance circular complex Gaussian symbols.
TrainingSequence generate_training(int n, int m_max, RandomStream& rng);

// Materializes the m x n window. Requires n == training.n and m <= m_max.
SensingMatrix build_sensing_matrix(const TrainingSequence& training, int m, int n);

// r = X h + z, z i.i.d. CN(0, sigma2) per entry.
Eigen::VectorXcd measure_full_rate(const SensingMatrix& x, const SparseChannel& h, double sigma2,
                                   RandomStream& rng);

// Noiseless block partial inner products; p must divide N.
SubsampleGrid measure_subsampled(const SensingMatrix& x, const SparseChannel& h, int p);

// As above plus i.i.d. CN(0, sigma2 / p) noise per cell, so each recombined
// row carries total noise variance sigma2. Draws cells row-major.
SubsampleGrid measure_subsampled(const SensingMatrix& x, const SparseChannel& h, int p,
                                 double sigma2, RandomStream& rng);

// Row sums of the grid: r[m] = sum_p values(m, p).
Eigen::VectorXcd recombine(const SubsampleGrid& grid);

// Builds m_e cyclic-shift patterns. Virtual index e (0-based) uses stride
// s = e / m + 1 and offset o = e % m: source_rows(e, p) = (o + p*s) mod m.
// For e < m this is the plain diagonal rule; larger e move to steeper
// strides so every pattern stays distinct. Throws std::invalid_argument if
// the requested count cannot be served with pairwise-distinct, non-constant
// patterns (a constant pattern would just replay an existing measurement).
ExtractionPattern extraction_pattern(int m, int p, int m_e);

// Virtual measurements: values[e] = sum_p grid(source_rows(e,p), p) and
// rows(e, c) = x(source_rows(e,p), c) for c in block p. On a noiseless grid
// values = rows * h holds by construction.
VirtualMeasurements extract_virtual(const SubsampleGrid& grid, const SensingMatrix& x,
                                    const ExtractionPattern& pattern);

// Stacks [r; r_e] and [X; X_e]. Empty virtual parts reduce the system to
// the plain full-rate model.
AssembledSystem assemble_system(const Eigen::VectorXcd& r, const Eigen::VectorXcd& r_e,
                                const SensingMatrix& x, const Eigen::MatrixXcd& x_e,
                                double sigma2, NoiseMode mode);

}  // namespace subnyq
