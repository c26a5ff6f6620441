// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "tensorpca/results.hpp"
#include "tensorpca/stream.hpp"

namespace tpca {

struct VectorSgaConfig {
    long num_samples = 0;             // N; 0 returns the normalized initialization
    double eta0 = 0.0;                // required, > 0 (no auto formula for baselines)
    std::optional<long> decay_phase;  // T1; shares the NSGA schedule default
    double momentum = 0.9;            // accelerated variant only, in [0, 1)
    bool normalize_each_step = false;
    std::optional<UnitVector> init;   // absent: uniform on the sphere
    long trace_every = 1;
};

/// Reward <v^{(x)k}, T> and its gradient in v:
/// grad(i) = sum_{l=1}^k <v^{(x)(l-1)} (x) e_i (x) v^{(x)(k-l)}, T>.
struct VectorReward {
    double reward = 0.0;
    std::vector<double> gradient;
};
VectorReward vector_reward_gradient(const DenseTensor& t, std::span<const double> v);

/// Plain stochastic gradient ascent on the vector parameterization; no
/// per-step normalization, estimate normalized only at the end.
RecoveryResult sga_vector(ObservationStream& stream, const VectorSgaConfig& cfg);

/// As sga_vector but the iterate is projected back onto the unit sphere after
/// every step.
RecoveryResult sga_projected(ObservationStream& stream, const VectorSgaConfig& cfg);

/// Heavy-ball acceleration with post-step normalization:
/// m <- momentum * m + grad; v <- normalize(v + eta * m).
RecoveryResult sga_accelerated(ObservationStream& stream, const VectorSgaConfig& cfg);

}  // namespace tpca
