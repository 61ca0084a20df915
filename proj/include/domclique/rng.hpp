#pragma once

#include <cstdint>

namespace domclique {

// SplitMix64 (Steele, Lea, Flood 2014). The finalizer is a bijection on
// 64-bit words; the generator walks a Weyl sequence through it, so stream k
// of a seed is mix(seed + (k+1) * golden).
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    constexpr double next_unit() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Seed for trial `index` under `master`. Independent of how trials are split
// across workers: seed_i = mix64(master ^ mix64(index + golden)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master ^ mix64(index + kGoldenGamma));
}

}  // namespace domclique
