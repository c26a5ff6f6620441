// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/baselines.hpp"

#include <cmath>
#include <limits>

#include "tensorpca/optim.hpp"

namespace tpca {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

enum class Variant { Plain, Projected, Accelerated };

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void validate(const VectorSgaConfig& cfg) {
    if (cfg.num_samples < 0)
        throw std::invalid_argument("VectorSgaConfig: num_samples must be >= 0");
    if (cfg.eta0 <= 0.0) throw std::invalid_argument("VectorSgaConfig: eta0 must be > 0");
    if (cfg.decay_phase && *cfg.decay_phase < 1)
        throw std::invalid_argument("VectorSgaConfig: decay_phase must be >= 1");
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0)
        throw std::invalid_argument("VectorSgaConfig: momentum must be in [0, 1)");
    if (cfg.trace_every < 1)
        throw std::invalid_argument("VectorSgaConfig: trace_every must be >= 1");
}

RecoveryResult run_vector_sga(ObservationStream& stream, const VectorSgaConfig& cfg,
                              Variant variant) {
    validate(cfg);
    const int d = stream.d();
    const long n = cfg.num_samples;
    const long t1 = cfg.decay_phase ? *cfg.decay_phase : (n >= 1 ? default_decay_phase(n) : 1);
    const long count0 = stream.count();
    const UnitVector& vstar = stream.signal();

    std::vector<double> v;
    if (cfg.init) {
        if (cfg.init->dim() != d)
            throw std::invalid_argument("VectorSgaConfig: init has wrong dimension");
        v = cfg.init->vec();
    } else {
        Rng algo_rng(derive_seed(stream.config().seed, {kSeedTagAlgo}));
        v = sample_signal(d, algo_rng).vec();
    }
    std::vector<double> mom(static_cast<std::size_t>(d), 0.0);

    RunTrace trace;
    auto signed_overlap = [&](const std::vector<double>& x) {
        const double nx = norm2(x);
        return nx == 0.0 ? 0.0 : dot(x, vstar.data()) / nx;
    };
    trace.append({0, step_schedule(0, cfg.eta0, t1), signed_overlap(v), norm2(v), kNan, kNan});

    for (long t = 0; t < n; ++t) {
        const DenseTensor obs = stream.next_observation();
        VectorReward vr = vector_reward_gradient(obs, v);
        const double eta = step_schedule(t, cfg.eta0, t1);
        switch (variant) {
            case Variant::Plain:
                for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] += eta * vr.gradient[static_cast<std::size_t>(i)];
                if (cfg.normalize_each_step) {
                    const double nv = norm2(v);
                    if (nv > 0.0)
                        for (double& x : v) x /= nv;
                }
                break;
            case Variant::Projected: {
                for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] += eta * vr.gradient[static_cast<std::size_t>(i)];
                const double nv = norm2(v);
                if (nv == 0.0) throw DivergenceError(t, std::move(trace));
                for (double& x : v) x /= nv;
                break;
            }
            case Variant::Accelerated: {
                for (int i = 0; i < d; ++i)
                    mom[static_cast<std::size_t>(i)] = cfg.momentum * mom[static_cast<std::size_t>(i)] + vr.gradient[static_cast<std::size_t>(i)];
                for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] += eta * mom[static_cast<std::size_t>(i)];
                const double nv = norm2(v);
                if (nv == 0.0) throw DivergenceError(t, std::move(trace));
                for (double& x : v) x /= nv;
                break;
            }
        }
        if (!all_finite(v)) throw DivergenceError(t, std::move(trace));
        const long t_next = t + 1;
        if (t_next % cfg.trace_every == 0 || t_next == n)
            trace.append({t_next, step_schedule(t_next, cfg.eta0, t1), signed_overlap(v),
                          norm2(v), vr.reward, kNan});
    }

    RecoveryResult res;
    res.estimate = UnitVector::normalized(v);
    res.candidates = {res.estimate};
    res.selected_instance = 0;
    res.error = recovery_error(res.estimate, vstar);
    res.samples_used = stream.count() - count0;
    res.seed = stream.config().seed;
    if (!trace.records.empty()) trace.records.back().error = res.error;
    res.trace = std::move(trace);
    return res;
}

}  // namespace

VectorReward vector_reward_gradient(const DenseTensor& t, std::span<const double> v) {
    if (static_cast<int>(v.size()) != t.dim())
        throw std::invalid_argument("vector_reward_gradient: dim mismatch");
    const int d = t.dim();
    const int k = t.order();
    VectorReward out;
    out.gradient.assign(static_cast<std::size_t>(d), 0.0);

    // Slot l leaves mode l free; the shared front chain carries modes 1..l-1
    // contracted with v, and the remaining modes are folded from the back.
    const DenseTensor* front = &t;
    DenseTensor front_store(1, d);
    for (int slot = 1; slot <= k; ++slot) {
        if (front->order() == 1) {
            const double* src = front->data().data();
            for (int i = 0; i < d; ++i) out.gradient[static_cast<std::size_t>(i)] += src[i];
        } else {
            DenseTensor cur = contract_last_mode(*front, v);
            while (cur.order() > 1) cur = contract_last_mode(cur, v);
            const double* src = cur.data().data();
            for (int i = 0; i < d; ++i) out.gradient[static_cast<std::size_t>(i)] += src[i];
        }
        if (slot < k) {
            front_store = mode1_contract(*front, v);
            front = &front_store;
        } else {
            // after the last slot `front` holds T contracted on modes 1..k-1;
            // one more contraction gives the reward value
            out.reward = front->order() == 1 ? dot(front->data(), v)
                                             : contract_all_modes(*front, v);
        }
    }
    return out;
}

RecoveryResult sga_vector(ObservationStream& stream, const VectorSgaConfig& cfg) {
    return run_vector_sga(stream, cfg, Variant::Plain);
}

RecoveryResult sga_projected(ObservationStream& stream, const VectorSgaConfig& cfg) {
    return run_vector_sga(stream, cfg, Variant::Projected);
}

RecoveryResult sga_accelerated(ObservationStream& stream, const VectorSgaConfig& cfg) {
    return run_vector_sga(stream, cfg, Variant::Accelerated);
}

}  // namespace tpca
