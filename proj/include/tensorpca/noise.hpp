// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "tensorpca/rng.hpp"

namespace tpca {

enum class NoiseKind { GaussianIID, RademacherIID, UniformIID };

/// Entrywise i.i.d. noise with zero mean and variance sigma^2:
///   gaussian    N(0, sigma^2)
///   rademacher  +/- sigma equiprobably
///   uniform     uniform on [-sigma*sqrt(3), sigma*sqrt(3)]
/// sigma = 0 is permitted as the degenerate noiseless mode.
struct NoiseModel {
    NoiseKind kind = NoiseKind::GaussianIID;
    double sigma = 1.0;

    double sample(Rng& rng) const;
};

std::string noise_kind_name(NoiseKind kind);
NoiseKind noise_kind_from_name(const std::string& name);

}  // namespace tpca
