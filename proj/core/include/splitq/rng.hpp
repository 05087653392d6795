#pragma once

#include <cstdint>

#include "splitq/rates.hpp"

namespace splitq {

/// The SplitMix64 output mix (Steele, Lea & Flood 2014; same finalizer as
/// java.util.SplittableRandom). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// SplitMix64 generator. One 64-bit counter advanced by the golden gamma and
/// pushed through mix64, so any state reachable from a seed is itself a valid
/// seed; substreams are derived by re-mixing the master seed with stream
/// coordinates rather than by jumping.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    /// Uniform draw on the half-open-from-below interval (0, 1]; 53-bit resolution.
    /// Zero is impossible by construction, so -log(u) is always finite.
    double next_unit() noexcept {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    static constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

private:
    std::uint64_t state_;
};

/// Deterministic substream for coordinates (a, b, c) under a master seed.
/// Each coordinate is folded in with the golden gamma and re-finalized, so
/// (seed, replication, purpose, stage) tuples map to decorrelated streams and
/// the mapping is independent of evaluation order.
constexpr SplitMix64 substream(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b,
                               std::uint64_t c) noexcept {
    std::uint64_t s = mix64(master_seed + SplitMix64::kGoldenGamma * (a + 1));
    s = mix64(s + SplitMix64::kGoldenGamma * (b + 1));
    s = mix64(s + SplitMix64::kGoldenGamma * (c + 1));
    return SplitMix64(s);
}

/// -ln(u)/rate for u in (0,1]. Pure; u = 1 maps to exactly 0.
double exponential_from_uniform(double u, double rate) noexcept;

/// Draw an exponential variate with the given rate (mean 1/rate).
double exponential_sample(SplitMix64& rng, Rate rate) noexcept;

}  // namespace splitq
