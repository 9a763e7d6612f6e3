#pragma once
#include <cstdint>

namespace qbounce {

// SplitMix64. Small state, full 64-bit period, and trivially reproducible
// across platforms; quality is sufficient for Monte Carlo sampling here.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

// Derived seed for substream `index` of a campaign seeded with `seed`.
// Each repetition gets an independent stream regardless of scheduling order.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
    return mixer.next();
}

} // namespace qbounce
