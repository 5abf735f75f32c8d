#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "subnyq/sensing.hpp"

namespace subnyq {

struct RecoveryConfig {
    int sparsity = 1;                  // target number of dominant taps
    int max_iterations = 50;
    double residual_tolerance = 1e-6;  // relative to ||phi||
    int identification_width = 0;      // candidates added per iteration; 0 = 2 * sparsity

    int effective_width() const {
        return identification_width > 0 ? identification_width : 2 * sparsity;
    }
};

struct ChannelEstimate {
    Eigen::VectorXcd coeffs;        // length N, at most `sparsity` nonzeros
    std::vector<int> support;       // sorted nonzero positions
    int iterations_used = 0;
    double final_residual_norm = 0.0;
};

struct LeastSquaresFit {
    Eigen::VectorXcd coeffs;      // one coefficient per support index
    bool rank_deficient = false;  // smallest singular value < 1e-10 * largest
};

// score[c] = |column_c^H residual|.
Eigen::VectorXd correlation_scores(const Eigen::MatrixXcd& phi_matrix,
                                   const Eigen::VectorXcd& residual);

// Minimizes ||phi - Phi_support * c|| via SVD. Rank-deficient systems get
// the minimum-norm minimizer (rcond 1e-10) and are flagged, not rejected.
// Empty support returns empty coefficients.
LeastSquaresFit least_squares_on_support(const Eigen::MatrixXcd& phi_matrix,
                                         const Eigen::VectorXcd& phi,
                                         std::span<const int> support);

// Greedy identify / merge / least-squares / prune loop. Stops on relative
// residual below tolerance, max_iterations, or three consecutive iterations
// without residual decrease; returns the best iterate seen, the zero
// estimate included, so final_residual_norm <= ||phi|| always.
ChannelEstimate cosamp(const AssembledSystem& system, const RecoveryConfig& config);

// Brute force over all k-subsets, minimum residual wins, ties to the
// lexicographically smallest support. Refuses when C(N, k) > 1e6.
ChannelEstimate exhaustive_oracle(const AssembledSystem& system, int k);

// Genie-aided least squares on the true support; MSE floor reference.
ChannelEstimate oracle_ls(const AssembledSystem& system, std::span<const int> true_support);

}  // namespace subnyq
