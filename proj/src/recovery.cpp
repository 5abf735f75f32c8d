#include "subnyq/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace subnyq {

namespace {

constexpr double kRankRcond = 1e-10;

// Indices of the `count` largest values, ties to the smaller index.
std::vector<int> top_indices(const Eigen::VectorXd& values, int count) {
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    count = std::min<int>(count, static_cast<int>(idx.size()));
    std::partial_sort(idx.begin(), idx.begin() + count, idx.end(), [&](int a, int b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return a < b;
    });
    idx.resize(count);
    return idx;
}

Eigen::MatrixXcd gather_columns(const Eigen::MatrixXcd& m, std::span<const int> cols) {
    Eigen::MatrixXcd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
    return out;
}

ChannelEstimate zero_estimate(const AssembledSystem& system) {
    ChannelEstimate est;
    est.coeffs = Eigen::VectorXcd::Zero(system.cols());
    est.final_residual_norm = system.measurements.norm();
    return est;
}

ChannelEstimate ls_estimate_on(const AssembledSystem& system, std::span<const int> support) {
    ChannelEstimate est;
    est.coeffs = Eigen::VectorXcd::Zero(system.cols());
    std::vector<int> cols(support.begin(), support.end());
    std::sort(cols.begin(), cols.end());
    const LeastSquaresFit fit = least_squares_on_support(system.matrix, system.measurements, cols);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const std::complex<double> c = fit.coeffs[static_cast<Eigen::Index>(j)];
        if (c == std::complex<double>(0.0, 0.0)) continue;  // support lists nonzeros only
        est.coeffs[cols[j]] = c;
        est.support.push_back(cols[j]);
    }
    est.final_residual_norm = (system.measurements - system.matrix * est.coeffs).norm();
    return est;
}

}  // namespace

Eigen::VectorXd correlation_scores(const Eigen::MatrixXcd& phi_matrix,
                                   const Eigen::VectorXcd& residual) {
    if (phi_matrix.rows() != residual.size())
        throw std::invalid_argument("correlation_scores: residual length does not match the matrix");
    return (phi_matrix.adjoint() * residual).cwiseAbs();
}

LeastSquaresFit least_squares_on_support(const Eigen::MatrixXcd& phi_matrix,
                                         const Eigen::VectorXcd& phi,
                                         std::span<const int> support) {
    if (phi_matrix.rows() != phi.size())
        throw std::invalid_argument("least_squares_on_support: dimensions disagree");
    LeastSquaresFit fit;
    if (support.empty()) {
        fit.coeffs.resize(0);
        return fit;
    }
    for (int c : support)
        if (c < 0 || c >= phi_matrix.cols())
            throw std::invalid_argument("least_squares_on_support: support index out of range");

    const Eigen::MatrixXcd sub = gather_columns(phi_matrix, support);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kRankRcond);
    fit.coeffs = svd.solve(phi);
    fit.rank_deficient = svd.rank() < sub.cols();
    return fit;
}

ChannelEstimate cosamp(const AssembledSystem& system, const RecoveryConfig& config) {
    const int n = system.cols();
    if (config.sparsity < 1 || config.sparsity > n)
        throw std::invalid_argument("cosamp: sparsity must satisfy 1 <= k <= N");
    if (config.max_iterations < 1 || config.effective_width() < 1)
        throw std::invalid_argument("cosamp: invalid iteration budget or identification width");
    if (system.rows() < 1) throw std::invalid_argument("cosamp: empty system");

    ChannelEstimate best = zero_estimate(system);
    const double phi_norm = best.final_residual_norm;
    if (phi_norm == 0.0) return best;

    Eigen::VectorXcd residual = system.measurements;
    std::vector<int> support;
    double prev_norm = phi_norm;
    int strikes = 0;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        const Eigen::VectorXd scores = correlation_scores(system.matrix, residual);
        std::vector<int> merged = top_indices(scores, config.effective_width());
        merged.insert(merged.end(), support.begin(), support.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        const LeastSquaresFit fit = least_squares_on_support(system.matrix, system.measurements, merged);
        Eigen::VectorXd magnitudes = fit.coeffs.cwiseAbs();
        const std::vector<int> keep = top_indices(magnitudes, config.sparsity);

        ChannelEstimate current;
        current.coeffs = Eigen::VectorXcd::Zero(n);
        current.support.reserve(keep.size());
        for (int j : keep) {
            if (fit.coeffs[j] == std::complex<double>(0.0, 0.0)) continue;
            current.coeffs[merged[j]] = fit.coeffs[j];
            current.support.push_back(merged[j]);
        }
        std::sort(current.support.begin(), current.support.end());

        residual = system.measurements - system.matrix * current.coeffs;
        const double rnorm = residual.norm();
        current.final_residual_norm = rnorm;
        current.iterations_used = iter;

        if (rnorm < best.final_residual_norm) best = current;
        if (rnorm <= config.residual_tolerance * phi_norm) break;

        if (rnorm < prev_norm) {
            strikes = 0;
        } else if (++strikes >= 3) {
            break;
        }
        prev_norm = rnorm;
        support = std::move(current.support);
    }
    return best;
}

ChannelEstimate exhaustive_oracle(const AssembledSystem& system, int k) {
    const int n = system.cols();
    if (k < 0 || k > n) throw std::invalid_argument("exhaustive_oracle: k out of range");
    if (k == 0) return zero_estimate(system);

    double count = 1.0;
    for (int i = 0; i < k; ++i) count = count * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (count > 1e6)
        throw std::invalid_argument("exhaustive_oracle: combinatorial budget C(N, k) <= 1e6 exceeded");

    std::vector<int> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    ChannelEstimate best;
    bool have_best = false;
    while (true) {
        ChannelEstimate cand = ls_estimate_on(system, comb);
        // Lexicographic enumeration plus strict < keeps the first, i.e.
        // lexicographically smallest, support on ties.
        if (!have_best || cand.final_residual_norm < best.final_residual_norm) {
            best = std::move(cand);
            have_best = true;
        }
        int i = k - 1;
        while (i >= 0 && comb[i] == n - k + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return best;
}

ChannelEstimate oracle_ls(const AssembledSystem& system, std::span<const int> true_support) {
    if (true_support.empty()) return zero_estimate(system);
    return ls_estimate_on(system, true_support);
}

}  // namespace subnyq
