// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>

namespace tpca {

/// Deterministic 64-bit generator (SplitMix64, Steele/Lea/Flood 2014).
///
/// The entire stream is a pure function of the 64-bit seed and is
/// reproducible from the published update/finalizer constants, which is why
/// it is used everywhere instead of std::mt19937 / std::normal_distribution
/// (whose outputs are not pinned across standard library implementations).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double next_unit();

    /// Standard normal via the Marsaglia polar method (second value cached).
    double next_gaussian();

    /// Single fair bit (top bit of next_u64).
    bool next_bit();

    /// Name recorded in configs/results for reproducibility.
    static const char* algorithm() { return "splitmix64"; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Derives a child seed from a base seed and a list of integer tags.
///
/// Rule (documented so an independent implementation can reproduce streams):
/// starting from s = mix64(base + GOLDEN), fold each part p as
/// s = mix64(s ^ (p + GOLDEN)), where mix64 is the SplitMix64 output
/// finalizer and GOLDEN = 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts);

// Fixed tags for the seed-splitting rule above.
inline constexpr std::uint64_t kSeedTagStream = 1;  // observation stream noise
inline constexpr std::uint64_t kSeedTagSignal = 2;  // planted-vector sampling
inline constexpr std::uint64_t kSeedTagAlgo = 3;    // algorithm-side choices
inline constexpr std::uint64_t kSeedTagTrial = 4;   // harness trial seeds
inline constexpr std::uint64_t kSeedTagCheck = 5;   // diagnostics checks

}  // namespace tpca
