#pragma once

#include <Eigen/Dense>
#include <vector>

#include "subnyq/rng.hpp"

namespace subnyq {

// Law of the dominant tap values.
enum class TapDistribution {
    EqualMagnitudeUniform,  // magnitude 1/sqrt(K), i.i.d. uniform phase
    Gaussian,               // i.i.d. CN(0, 1/K)
};

// K-sparse discrete channel impulse response of length N.
struct SparseChannel {
    Eigen::VectorXcd taps;     // length N, exactly K nonzeros
    std::vector<int> support;  // sorted nonzero positions, size K

    int length() const { return static_cast<int>(taps.size()); }
    int sparsity() const { return static_cast<int>(support.size()); }
};

// Draws a K-sparse channel: support uniform without replacement over [0, n),
// tap values per `dist`. Both laws give E[||h||^2] = 1; the equal-magnitude
// law satisfies it exactly per realization.
// Throws std::invalid_argument unless 1 <= k <= n.
SparseChannel generate_sparse_channel(int n, int k, TapDistribution dist, RandomStream& rng);

}  // namespace subnyq
