// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "tensorpca/matrix.hpp"
#include "tensorpca/noise.hpp"
#include "tensorpca/tensor.hpp"

namespace tpca {

/// Uniform point on the unit sphere (normalized Gaussian vector).
UnitVector sample_signal(int d, Rng& rng);

struct StreamConfig {
    int d = 0;
    int k = 0;
    double lambda = 1.0;
    NoiseModel noise;
    std::uint64_t seed = 0;
    std::optional<UnitVector> signal;  // sampled uniformly when absent
};

/// Spiked tensor observation stream: each call to next_observation returns a
/// fresh lambda * v*^{(x)k} + E with entrywise i.i.d. noise. Deterministic
/// given the config; single-owner mutable state.
class ObservationStream {
public:
    explicit ObservationStream(StreamConfig cfg,
                               std::size_t budget = kDefaultElementBudget);

    const StreamConfig& config() const { return cfg_; }
    const UnitVector& signal() const { return signal_; }
    int d() const { return cfg_.d; }
    int k() const { return cfg_.k; }
    double lambda() const { return cfg_.lambda; }
    long count() const { return count_; }

    DenseTensor next_observation();

    /// Entrywise mean of n fresh observations; consumes n samples.
    DenseTensor holdout_mean(long n);

    /// Averages n1 observations, applies the partial trace, normalizes.
    /// Requires odd k; throws if the traced vector is exactly zero.
    UnitVector partial_trace_preprocess(long n1);

private:
    StreamConfig cfg_;
    std::size_t budget_;
    Rng rng_;
    UnitVector signal_;
    DenseTensor scaled_signal_;  // lambda * v*^{(x)k}, cached
    long count_ = 0;
};

}  // namespace tpca
