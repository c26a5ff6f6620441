// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace tpca {

double NoiseModel::sample(Rng& rng) const {
    switch (kind) {
        case NoiseKind::GaussianIID:
            return sigma * rng.next_gaussian();
        case NoiseKind::RademacherIID:
            return rng.next_bit() ? sigma : -sigma;
        case NoiseKind::UniformIID: {
            const double half_width = sigma * std::sqrt(3.0);
            return half_width * (2.0 * rng.next_unit() - 1.0);
        }
    }
    throw std::logic_error("NoiseModel: unknown kind");
}

std::string noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::GaussianIID: return "gaussian";
        case NoiseKind::RademacherIID: return "rademacher";
        case NoiseKind::UniformIID: return "uniform";
    }
    throw std::logic_error("NoiseModel: unknown kind");
}

NoiseKind noise_kind_from_name(const std::string& name) {
    if (name == "gaussian") return NoiseKind::GaussianIID;
    if (name == "rademacher") return NoiseKind::RademacherIID;
    if (name == "uniform") return NoiseKind::UniformIID;
    throw std::invalid_argument("unknown noise kind: " + name);
}

}  // namespace tpca
