#pragma once

// Pinned pseudo-random machinery.
//
// Reproducibility across platforms and worker counts requires every random
// draw in the library to come from algorithms fixed here:
//   * split_mix(z)     — the SplitMix64 finalizer, used for seed derivation
//   * Rng              — xoshiro256++ streams seeded through SplitMix64
//   * derive_seed(...) — the documented stream-splitting hash: starting from
//                        split_mix(root), fold each context word w with
//                        h = split_mix(h ^ split_mix(w))
// Uniform doubles are built from the top 53 bits and land strictly inside
// (0,1); normal variates go through norm_quantile (inverse-CDF method).

#include <cstdint>
#include <initializer_list>

#include "swaptest/normal.hpp"

namespace swaptest {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t split_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-stream seed from a root seed and context words
/// (experiment id, replicate index, pair indices, ...).
inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = split_mix(root);
    for (std::uint64_t p : parts) h = split_mix(h ^ split_mix(p));
    return h;
}

// Context tags for derive_seed; keeps the tie-break, data and estimate
// streams of one experiment disjoint.
namespace stream {
inline constexpr std::uint64_t kTie = 0x11;
inline constexpr std::uint64_t kData = 0x22;
inline constexpr std::uint64_t kTheta = 0x33;
inline constexpr std::uint64_t kShuffle = 0x44;
inline constexpr std::uint64_t kMcOriginal = 0x55;
inline constexpr std::uint64_t kMcSwapped = 0x66;
inline constexpr std::uint64_t kBootstrap = 0x77;
}  // namespace stream

/// xoshiro256++ (Blackman & Vigna 2019), state seeded via SplitMix64.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double strictly inside (0,1): ((bits >> 11) + 0.5) * 2^-53.
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal variate via the pinned inverse-CDF kernel.
    double normal() { return norm_quantile(uniform01()); }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Unbiased draw from {0, ..., n-1} by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Fair coin.
    bool coin() { return (next() >> 63) != 0; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace swaptest
