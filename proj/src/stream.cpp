// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/stream.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace tpca {

UnitVector sample_signal(int d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("sample_signal: d must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(d));
    double n2 = 0.0;
    do {
        for (double& x : v) x = rng.next_gaussian();
        n2 = dot(v, v);
    } while (n2 == 0.0);
    return UnitVector::normalized(std::move(v));
}

namespace {

DenseTensor make_scaled_signal(const StreamConfig& cfg, const UnitVector& signal,
                               std::size_t budget) {
    DenseTensor t = rank_one_tensor(signal.data(), cfg.k, budget);
    for (double& x : t.data()) x *= cfg.lambda;
    return t;
}

}  // namespace

ObservationStream::ObservationStream(StreamConfig cfg, std::size_t budget)
    : cfg_(std::move(cfg)),
      budget_(budget),
      rng_(derive_seed(cfg_.seed, {kSeedTagStream})),
      signal_(),
      scaled_signal_(1, 1) {
    if (cfg_.d < 1 || cfg_.k < 1)
        throw std::invalid_argument("ObservationStream: d and k must be >= 1");
    if (cfg_.lambda < 0.0)
        throw std::invalid_argument("ObservationStream: lambda must be >= 0");
    if (cfg_.noise.sigma < 0.0)
        throw std::invalid_argument("ObservationStream: sigma must be >= 0");
    tensor_element_count(cfg_.d, cfg_.k, budget_);
    if (cfg_.signal) {
        if (cfg_.signal->dim() != cfg_.d)
            throw std::invalid_argument("ObservationStream: signal dim != d");
        signal_ = *cfg_.signal;
    } else {
        Rng signal_rng(derive_seed(cfg_.seed, {kSeedTagSignal}));
        signal_ = sample_signal(cfg_.d, signal_rng);
    }
    scaled_signal_ = make_scaled_signal(cfg_, signal_, budget_);
    if (cfg_.d < cfg_.k)
        std::cerr << "warning: d=" << cfg_.d << " < k=" << cfg_.k
                  << " violates the d >= k model assumption\n";
    const double lambda_hi = std::pow(static_cast<double>(cfg_.d), cfg_.k / 4.0);
    if (cfg_.lambda < 1.0 || cfg_.lambda > lambda_hi)
        std::cerr << "warning: lambda=" << cfg_.lambda
                  << " outside the assumed window [1, d^{k/4}=" << lambda_hi << "]\n";
}

DenseTensor ObservationStream::next_observation() {
    DenseTensor out = DenseTensor::from_flat(
        cfg_.k, cfg_.d,
        std::vector<double>(scaled_signal_.data().begin(), scaled_signal_.data().end()),
        budget_);
    if (cfg_.noise.sigma > 0.0) {
        for (double& x : out.data()) x += cfg_.noise.sample(rng_);
    }
    ++count_;
    return out;
}

DenseTensor ObservationStream::holdout_mean(long n) {
    if (n < 1) throw std::invalid_argument("holdout_mean: n must be >= 1");
    DenseTensor acc = next_observation();
    for (long i = 1; i < n; ++i) {
        DenseTensor obs = next_observation();
        const double* src = obs.data().data();
        double* dst = acc.data().data();
        const std::size_t len = acc.size();
        for (std::size_t p = 0; p < len; ++p) dst[p] += src[p];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& x : acc.data()) x *= inv;
    return acc;
}

UnitVector ObservationStream::partial_trace_preprocess(long n1) {
    if (cfg_.k % 2 == 0)
        throw std::invalid_argument("partial_trace_preprocess: k must be odd");
    if (n1 < 1) throw std::invalid_argument("partial_trace_preprocess: n1 must be >= 1");
    const DenseTensor mean = holdout_mean(n1);
    std::vector<double> traced = partial_trace_vector(mean);
    const double n = norm2(traced);
    if (n == 0.0)
        throw std::runtime_error("partial_trace_preprocess: traced vector is exactly zero");
    return UnitVector::normalized(std::move(traced));
}

}  // namespace tpca
