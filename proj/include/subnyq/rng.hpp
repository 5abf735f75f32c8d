#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace subnyq {

// SplitMix64 finalizer. Bijective on uint64, used to decorrelate seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Deterministic random stream: mt19937_64 with hand-rolled output
// transforms, so the produced doubles are identical on every platform
// (the standard pins the engine but not the <random> distributions).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    // Child stream selected by label. fork(L) is a pure function of
    // (seed, L): calling it twice yields the same stream.
    RandomStream fork(std::uint64_t label) const {
        return RandomStream(mix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (label + 1))));
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Circularly symmetric complex Gaussian CN(0, variance): Rayleigh
    // magnitude, uniform phase. Real and imaginary parts each carry
    // variance/2. Always consumes two engine outputs, variance 0 included.
    std::complex<double> complex_gaussian(double variance) {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-variance * std::log(u1));
        return std::polar(r, 2.0 * 3.141592653589793238462643383279502884 * u2);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// Per-trial stream derivation: trial_index is mapped through an odd
// multiplier and XORed into the mixed master seed, then finalized. Distinct
// trial indices always yield distinct stream seeds.
inline RandomStream trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RandomStream(mix64(mix64(master_seed) ^ (0x9e3779b97f4a7c15ULL * (trial_index + 1))));
}

}  // namespace subnyq
