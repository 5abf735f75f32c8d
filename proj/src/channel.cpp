#include "subnyq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace subnyq {

namespace {

// Partial Fisher-Yates: first k entries of a shuffled [0, n) prefix.
std::vector<int> sample_support(int n, int k, RandomStream& rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.uniform() * static_cast<double>(n - i));
        if (j >= n) j = n - 1;  // uniform() < 1, but guard the cast
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

SparseChannel generate_sparse_channel(int n, int k, TapDistribution dist, RandomStream& rng) {
    if (k < 1 || k > n)
        throw std::invalid_argument("generate_sparse_channel: sparsity k must satisfy 1 <= k <= n");

    SparseChannel ch;
    ch.support = sample_support(n, k, rng);
    ch.taps = Eigen::VectorXcd::Zero(n);

    const double inv_k = 1.0 / static_cast<double>(k);
    for (int pos : ch.support) {
        if (dist == TapDistribution::EqualMagnitudeUniform) {
            const double theta = 2.0 * 3.141592653589793238462643383279502884 * rng.uniform();
            ch.taps[pos] = std::polar(std::sqrt(inv_k), theta);
        } else {
            ch.taps[pos] = rng.complex_gaussian(inv_k);
        }
    }
    return ch;
}

}  // namespace subnyq
