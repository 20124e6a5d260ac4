#pragma once

#include <cstdint>

namespace queuetail {

/// SplitMix64 (Steele, Lea, Flood 2014). Counter-based, 64-bit state, fixed
/// output sequence on every platform. Also used to derive replication seeds.
class SplitMix64 {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t next() noexcept {
        state_ += kGolden;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Seed of replication `index` (0-based) under `base_seed`:
/// mix(base_seed + (index + 1) * golden).
constexpr std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return SplitMix64::mix(base_seed + (index + 1) * SplitMix64::kGolden);
}

}  // namespace queuetail
