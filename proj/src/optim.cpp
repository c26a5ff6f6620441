// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tensorpca/contract.hpp"
#include "tensorpca/eigensolver.hpp"

namespace tpca {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double traced_error(const SquareMatrix& w, const UnitVector& vstar) {
    try {
        EigenResult er = sym_top_eigenvector(w.transpose_sum(), 1e-10, 10000);
        return recovery_error(er.vector, vstar);
    } catch (const EigenConvergenceError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kCollapseFloor = 1e-100;

void validate_common(const NsgaConfig& cfg) {
    if (cfg.num_samples < 1)
        throw std::invalid_argument("NsgaConfig: num_samples must be >= 1");
    if (cfg.eta0 && *cfg.eta0 <= 0.0)
        throw std::invalid_argument("NsgaConfig: eta0 must be > 0");
    if (cfg.decay_phase && *cfg.decay_phase < 1)
        throw std::invalid_argument("NsgaConfig: decay_phase must be >= 1");
    if (cfg.trace_every < 1)
        throw std::invalid_argument("NsgaConfig: trace_every must be >= 1");
    if (const auto* h = std::get_if<HoldoutSelection>(&cfg.selection)) {
        if (!(h->fraction > 0.0 && h->fraction < 1.0))
            throw std::invalid_argument("NsgaConfig: holdout fraction must be in (0, 1)");
    }
}

}  // namespace

NumericalCollapseError::NumericalCollapseError(long step_, RunTrace trace_)
    : std::runtime_error("parameter norm collapsed below 1e-100 at step " +
                         std::to_string(step_)),
      step(step_),
      trace(std::move(trace_)) {}

DivergenceError::DivergenceError(long step_, RunTrace trace_)
    : std::runtime_error("non-finite parameter entries at step " + std::to_string(step_) +
                         " (eta0 too large?)"),
      step(step_),
      trace(std::move(trace_)) {}

double alignment(const UnitVector& v, const SquareMatrix& w) {
    if (v.dim() != w.dim()) throw std::invalid_argument("alignment: dim mismatch");
    const double fro = w.frobenius_norm();
    if (fro == 0.0) throw std::invalid_argument("alignment: zero matrix");
    // Cauchy-Schwarz bounds |v^T W v| by ||W||_F; clamp the roundoff excess.
    return std::clamp(w.quad_form(v.data()) / fro, -1.0, 1.0);
}

double recovery_error(const UnitVector& vhat, const UnitVector& vstar) {
    if (vhat.dim() != vstar.dim())
        throw std::invalid_argument("recovery_error: dim mismatch");
    auto check_unit = [](const UnitVector& u) {
        if (std::abs(norm2(u.data()) - 1.0) > 1e-9)
            throw std::invalid_argument("recovery_error: input is not unit to 1e-9");
    };
    check_unit(vhat);
    check_unit(vstar);
    return std::max(0.0, 2.0 - 2.0 * std::abs(dot(vhat.data(), vstar.data())));
}

double step_schedule(long t, double eta0, long t1) {
    if (t < 0) throw std::invalid_argument("step_schedule: t must be >= 0");
    if (t1 < 1) throw std::invalid_argument("step_schedule: t1 must be >= 1");
    const long halvings = t / t1;
    return std::ldexp(eta0, halvings > 4000 ? -4000 : -static_cast<int>(halvings));
}

long default_decay_phase(long num_samples) {
    if (num_samples < 1) throw std::invalid_argument("default_decay_phase: N must be >= 1");
    if (num_samples < 3) return 1;
    const double t1 = std::floor(static_cast<double>(num_samples) /
                                 std::log(static_cast<double>(num_samples)));
    return std::max<long>(1, static_cast<long>(t1));
}

Eta0Breakdown default_eta0_even(int d, int k, double lambda, long num_samples) {
    if (k < 4 || k % 2 != 0)
        throw std::invalid_argument("default_eta0_even: k must be even and >= 4");
    if (d < 2) throw std::invalid_argument("default_eta0_even: d must be >= 2");
    if (lambda <= 0.0) throw std::invalid_argument("default_eta0_even: lambda must be > 0");
    if (num_samples < 3) throw std::invalid_argument("default_eta0_even: N must be >= 3");
    const double n = static_cast<double>(num_samples);
    const double log_n = std::log(n);
    Eta0Breakdown out;
    out.log_branch = log_n / static_cast<double>(k);
    const double denom = std::max(static_cast<double>(k) * (k - 4),
                                  1.0 / std::log(static_cast<double>(d)));
    out.dim_branch = static_cast<double>(k) *
                     std::pow(static_cast<double>(d), k / 4.0 - 1.0) / denom;
    out.value = std::max(out.log_branch, out.dim_branch) * std::ceil(log_n) / (lambda * n);
    return out;
}

Eta0Breakdown default_eta0_odd(int d, int k, double lambda, long num_samples,
                               const Preprocess& preprocess) {
    if (k < 5 || k % 2 == 0)
        throw std::invalid_argument("default_eta0_odd: k must be odd and >= 5");
    // Effective SNR surrogate for |<v*, u>|: d^{-1/4} for the partial-trace
    // vector, d^{-1/2} for a random unit vector, 1 for a caller-supplied u.
    double overlap = 1.0;
    if (std::holds_alternative<RandomUnitPreprocess>(preprocess))
        overlap = 1.0 / std::sqrt(static_cast<double>(d));
    else if (std::holds_alternative<PartialTracePreprocess>(preprocess))
        overlap = std::pow(static_cast<double>(d), -0.25);
    return default_eta0_even(d, k - 1, lambda * overlap, num_samples);
}

double effective_snr(double lambda, const UnitVector& vstar, const UnitVector& u) {
    if (vstar.dim() != u.dim()) throw std::invalid_argument("effective_snr: dim mismatch");
    return lambda * dot(vstar.data(), u.data());
}

double nsga_step(SquareMatrix& w, const DenseTensor& t_even, double eta, double reward_sign) {
    const int k_eff = t_even.order();
    if (k_eff % 2 != 0 || k_eff < 4)
        throw std::invalid_argument("nsga_step: observation order must be even and >= 4");
    if (t_even.dim() != w.dim()) throw std::invalid_argument("nsga_step: dim mismatch");
    const int m = k_eff / 2;
    const double fro = w.frobenius_norm();
    if (fro < kCollapseFloor) throw NumericalCollapseError(-1, RunTrace{});
    const double reward = reward_sign * contract_matrix_power(t_even, w);
    const SquareMatrix grad = reward_gradient(t_even, w);
    const double shift =
        1.0 - eta * static_cast<double>(k_eff - 4) * reward / (2.0 * ipow(fro, m));
    const double gain = reward_sign * eta / ipow(fro, m - 2);
    w.scale_add(shift, gain, grad);
    if (!w.all_finite()) throw DivergenceError(-1, RunTrace{});
    return reward;
}

namespace {

struct NsgaInstance {
    SquareMatrix w;
    double sign = 1.0;
    RunTrace trace;
};

// Shared NSGA loop; `make_even` turns a raw observation into the even-order
// reward tensor (identity for even k, mode-1 contraction by u for odd k).
template <typename MakeEven>
void run_nsga_loop(ObservationStream& stream, std::vector<NsgaInstance>& instances,
                   long n_steps, double eta0, long t1, long trace_every, bool trace_errors,
                   MakeEven&& make_even) {
    const UnitVector& vstar = stream.signal();
    for (NsgaInstance& ins : instances) {
        ins.trace.append({0, step_schedule(0, eta0, t1), alignment(vstar, ins.w),
                          ins.w.frobenius_norm(), kNan,
                          trace_errors ? traced_error(ins.w, vstar) : kNan});
    }
    for (long t = 0; t < n_steps; ++t) {
        const DenseTensor obs = stream.next_observation();
        decltype(auto) t_even = make_even(obs);
        const double eta = step_schedule(t, eta0, t1);
        const long t_next = t + 1;
        const bool traced = (t_next % trace_every == 0) || t_next == n_steps;
        for (NsgaInstance& ins : instances) {
            double reward;
            try {
                reward = nsga_step(ins.w, t_even, eta, ins.sign);
            } catch (const NumericalCollapseError&) {
                throw NumericalCollapseError(t, std::move(ins.trace));
            } catch (const DivergenceError&) {
                throw DivergenceError(t, std::move(ins.trace));
            }
            if (traced) {
                ins.trace.append({t_next, step_schedule(t_next, eta0, t1),
                                  alignment(vstar, ins.w), ins.w.frobenius_norm(), reward,
                                  trace_errors ? traced_error(ins.w, vstar) : kNan});
            }
        }
    }
}

UnitVector finalize_instance(const SquareMatrix& w) {
    return sym_top_eigenvector(w.transpose_sum(), 1e-10, 10000).vector;
}

}  // namespace

RecoveryResult nsga_even(ObservationStream& stream, const NsgaConfig& cfg) {
    validate_common(cfg);
    const int k = stream.k();
    const int d = stream.d();
    if (k < 4 || k % 2 != 0)
        throw std::invalid_argument("nsga_even: k must be even and >= 4");
    const long n = cfg.num_samples;
    const double eta0 =
        cfg.eta0 ? *cfg.eta0
                 : cfg.eta0_scale * default_eta0_even(d, k, stream.lambda(), n).value;
    const long t1 = cfg.decay_phase ? *cfg.decay_phase : default_decay_phase(n);
    const long count0 = stream.count();

    std::vector<NsgaInstance> instances;
    instances.push_back({SquareMatrix::identity(d), 1.0, RunTrace{}});
    run_nsga_loop(stream, instances, n, eta0, t1, cfg.trace_every, cfg.trace_errors,
                  [](const DenseTensor& obs) -> const DenseTensor& { return obs; });

    RecoveryResult res;
    res.estimate = finalize_instance(instances[0].w);
    res.candidates = {res.estimate};
    res.selected_instance = 0;
    res.error = recovery_error(res.estimate, stream.signal());
    res.samples_used = stream.count() - count0;
    res.seed = stream.config().seed;
    // final record carries the extracted estimate's error
    if (!instances[0].trace.records.empty())
        instances[0].trace.records.back().error = res.error;
    res.trace = std::move(instances[0].trace);
    return res;
}

RecoveryResult nsga_odd(ObservationStream& stream, const NsgaConfig& cfg) {
    validate_common(cfg);
    const int k = stream.k();
    const int d = stream.d();
    if (k < 5 || k % 2 == 0)
        throw std::invalid_argument("nsga_odd: k must be odd and >= 5");
    const long n = cfg.num_samples;
    const long count0 = stream.count();
    Rng algo_rng(derive_seed(stream.config().seed, {kSeedTagAlgo}));

    const UnitVector u = std::visit(
        [&](const auto& p) -> UnitVector {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, RandomUnitPreprocess>) {
                return sample_signal(d, algo_rng);
            } else if constexpr (std::is_same_v<P, PartialTracePreprocess>) {
                return stream.partial_trace_preprocess(p.n1);
            } else {
                if (p.u.dim() != d)
                    throw std::invalid_argument("nsga_odd: given u has wrong dimension");
                return p.u;
            }
        },
        cfg.preprocess);

    long n_hold = 0;
    if (const auto* h = std::get_if<HoldoutSelection>(&cfg.selection))
        n_hold = static_cast<long>(std::ceil(h->fraction * static_cast<double>(n)));
    const long n_opt = n - n_hold;
    if (n_opt < 1)
        throw std::invalid_argument("nsga_odd: no optimization samples left after holdout");

    const double eta0 =
        cfg.eta0 ? *cfg.eta0
                 : cfg.eta0_scale *
                       default_eta0_odd(d, k, stream.lambda(), n, cfg.preprocess).value;
    const long t1 = cfg.decay_phase ? *cfg.decay_phase : default_decay_phase(n);

    std::vector<NsgaInstance> instances;
    instances.push_back({SquareMatrix::identity(d), 1.0, RunTrace{}});
    instances.push_back({SquareMatrix::identity(d), -1.0, RunTrace{}});
    run_nsga_loop(stream, instances, n_opt, eta0, t1, cfg.trace_every, cfg.trace_errors,
                  [&u](const DenseTensor& obs) { return mode1_contract(obs, u.data()); });

    const UnitVector v1 = finalize_instance(instances[0].w);
    const UnitVector v2 = finalize_instance(instances[1].w);

    RecoveryResult res;
    res.candidates = {v1, v1.negated(), v2, v2.negated()};
    int chosen = 0;
    if (std::holds_alternative<RandomPickSelection>(cfg.selection)) {
        chosen = algo_rng.next_bit() ? 2 : 0;  // candidate index of +v1 / +v2
    } else {
        const DenseTensor t_esti = stream.holdout_mean(n_hold);
        double best = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < 4; ++c) {
            const double score = contract_all_modes(t_esti, res.candidates[c].data());
            if (score > best) {
                best = score;
                chosen = c;
            }
        }
    }
    res.estimate = res.candidates[static_cast<std::size_t>(chosen)];
    res.selected_instance = chosen < 2 ? 1 : 2;
    res.error = recovery_error(res.estimate, stream.signal());
    res.samples_used = stream.count() - count0;
    res.seed = stream.config().seed;
    RunTrace& selected_trace = instances[static_cast<std::size_t>(res.selected_instance - 1)].trace;
    if (!selected_trace.records.empty()) selected_trace.records.back().error = res.error;
    res.trace = std::move(selected_trace);
    return res;
}

}  // namespace tpca
