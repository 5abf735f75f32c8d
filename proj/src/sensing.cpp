#include "subnyq/sensing.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

namespace subnyq {

namespace {

// Inner product of one matrix row with the channel restricted to tap
// indices [c0, c1), accumulated in ascending support order. Both sampling
// paths go through this so the P = 1 grid reproduces the full-rate
// measurement bit for bit.
std::complex<double> partial_inner(const Eigen::MatrixXcd& entries, const SparseChannel& h,
                                   int row, int c0, int c1) {
    std::complex<double> acc(0.0, 0.0);
    for (int pos : h.support) {
        if (pos < c0 || pos >= c1) continue;
        acc += entries(row, pos) * h.taps[pos];
    }
    return acc;
}

}  // namespace

TrainingSequence generate_training(int n, int m_max, RandomStream& rng) {
    if (n < 1 || m_max < 1)
        throw std::invalid_argument("generate_training: n and m_max must be positive");
    TrainingSequence seq;
    seq.n = n;
    seq.m_max = m_max;
    seq.symbols.resize(n + m_max - 1);
    for (Eigen::Index i = 0; i < seq.symbols.size(); ++i)
        seq.symbols[i] = rng.complex_gaussian(1.0);
    return seq;
}

SensingMatrix build_sensing_matrix(const TrainingSequence& training, int m, int n) {
    if (n != training.n)
        throw std::invalid_argument("build_sensing_matrix: n does not match the training sequence");
    if (m < 1 || m > training.m_max)
        throw std::invalid_argument("build_sensing_matrix: row count exceeds training capacity");

    SensingMatrix x;
    x.entries.resize(m, n);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c)
            x.entries(r, c) = training.symbols[n + r - c - 1];
    return x;
}

Eigen::VectorXcd measure_full_rate(const SensingMatrix& x, const SparseChannel& h, double sigma2,
                                   RandomStream& rng) {
    if (x.cols() != h.length())
        throw std::invalid_argument("measure_full_rate: channel length does not match the matrix");
    Eigen::VectorXcd r(x.rows());
    for (int m = 0; m < x.rows(); ++m)
        r[m] = partial_inner(x.entries, h, m, 0, x.cols()) + rng.complex_gaussian(sigma2);
    return r;
}

SubsampleGrid measure_subsampled(const SensingMatrix& x, const SparseChannel& h, int p) {
    if (x.cols() != h.length())
        throw std::invalid_argument("measure_subsampled: channel length does not match the matrix");
    if (p < 1 || x.cols() % p != 0)
        throw std::invalid_argument("measure_subsampled: branch count must divide the channel length");

    SubsampleGrid grid;
    grid.block_len = x.cols() / p;
    grid.noise_variance_per_cell = 0.0;
    grid.values.resize(x.rows(), p);
    for (int m = 0; m < x.rows(); ++m)
        for (int b = 0; b < p; ++b)
            grid.values(m, b) = partial_inner(x.entries, h, m, b * grid.block_len, (b + 1) * grid.block_len);
    return grid;
}

SubsampleGrid measure_subsampled(const SensingMatrix& x, const SparseChannel& h, int p,
                                 double sigma2, RandomStream& rng) {
    SubsampleGrid grid = measure_subsampled(x, h, p);
    grid.noise_variance_per_cell = sigma2 / static_cast<double>(p);
    for (int m = 0; m < grid.rows(); ++m)
        for (int b = 0; b < p; ++b)
            grid.values(m, b) += rng.complex_gaussian(grid.noise_variance_per_cell);
    return grid;
}

Eigen::VectorXcd recombine(const SubsampleGrid& grid) {
    Eigen::VectorXcd r(grid.rows());
    for (int m = 0; m < grid.rows(); ++m) {
        std::complex<double> acc(0.0, 0.0);
        for (int b = 0; b < grid.branches(); ++b) acc += grid.values(m, b);
        r[m] = acc;
    }
    return r;
}

ExtractionPattern extraction_pattern(int m, int p, int m_e) {
    if (m < 1 || p < 1) throw std::invalid_argument("extraction_pattern: m and p must be positive");
    if (m_e < 0) throw std::invalid_argument("extraction_pattern: m_e must be nonnegative");

    ExtractionPattern pat;
    pat.m = m;
    pat.source_rows.resize(m_e, p);
    for (int e = 0; e < m_e; ++e) {
        const int stride = e / m + 1;
        const int offset = e % m;
        for (int b = 0; b < p; ++b)
            pat.source_rows(e, b) = (offset + b * stride) % m;
    }

    // A constant pattern replays r_m verbatim; a duplicated pattern replays
    // another virtual row. Both mean the requested count is out of range.
    std::set<std::vector<int>> seen;
    for (int e = 0; e < m_e; ++e) {
        std::vector<int> row(p);
        bool constant = true;
        for (int b = 0; b < p; ++b) {
            row[b] = pat.source_rows(e, b);
            if (row[b] != row[0]) constant = false;
        }
        if (constant)
            throw std::invalid_argument(
                "extraction_pattern: requested count exceeds the distinct non-constant patterns");
        if (!seen.insert(std::move(row)).second)
            throw std::invalid_argument(
                "extraction_pattern: requested count exceeds the distinct non-constant patterns");
    }
    return pat;
}

VirtualMeasurements extract_virtual(const SubsampleGrid& grid, const SensingMatrix& x,
                                    const ExtractionPattern& pattern) {
    if (grid.rows() != x.rows() || grid.branches() * grid.block_len != x.cols())
        throw std::invalid_argument("extract_virtual: grid and matrix dimensions disagree");
    if (pattern.m != grid.rows())
        throw std::invalid_argument("extract_virtual: pattern was built for a different row count");
    if (pattern.count() > 0 && pattern.source_rows.cols() != grid.branches())
        throw std::invalid_argument("extract_virtual: pattern was built for a different branch count");

    const int m_e = pattern.count();
    VirtualMeasurements out;
    out.values.resize(m_e);
    out.rows.resize(m_e, x.cols());
    for (int e = 0; e < m_e; ++e) {
        std::complex<double> acc(0.0, 0.0);
        for (int b = 0; b < grid.branches(); ++b) {
            const int src = pattern.source_rows(e, b);
            acc += grid.values(src, b);
            out.rows.block(e, b * grid.block_len, 1, grid.block_len) =
                x.entries.block(src, b * grid.block_len, 1, grid.block_len);
        }
        out.values[e] = acc;
    }
    return out;
}

AssembledSystem assemble_system(const Eigen::VectorXcd& r, const Eigen::VectorXcd& r_e,
                                const SensingMatrix& x, const Eigen::MatrixXcd& x_e,
                                double sigma2, NoiseMode mode) {
    if (r.size() != x.rows())
        throw std::invalid_argument("assemble_system: measurement count does not match the matrix");
    if (r_e.size() != x_e.rows())
        throw std::invalid_argument("assemble_system: virtual measurement count does not match");
    if (r_e.size() > 0 && x_e.cols() != x.cols())
        throw std::invalid_argument("assemble_system: virtual rows have the wrong column count");

    AssembledSystem sys;
    sys.noise_variance = sigma2;
    sys.noise_mode = mode;
    const Eigen::Index m = r.size(), me = r_e.size();
    sys.measurements.resize(m + me);
    sys.measurements.head(m) = r;
    if (me > 0) sys.measurements.tail(me) = r_e;
    sys.matrix.resize(m + me, x.cols());
    sys.matrix.topRows(m) = x.entries;
    if (me > 0) sys.matrix.bottomRows(me) = x_e;
    return sys;
}

}  // namespace subnyq
