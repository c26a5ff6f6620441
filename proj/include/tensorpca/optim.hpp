// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <variant>

#include "tensorpca/results.hpp"
#include "tensorpca/stream.hpp"

namespace tpca {

// --- candidate selection (odd k) -------------------------------------------

struct RandomPickSelection {};

struct HoldoutSelection {
    double fraction = 0.5;  // share of the budget spent on the averaged tensor
};

using Selection = std::variant<RandomPickSelection, HoldoutSelection>;

// --- preprocessing vector u (odd k) -----------------------------------------

struct RandomUnitPreprocess {};

struct PartialTracePreprocess {
    long n1 = 1;  // observations averaged before the partial trace
};

struct GivenPreprocess {
    UnitVector u;
};

using Preprocess = std::variant<RandomUnitPreprocess, PartialTracePreprocess, GivenPreprocess>;

// ----------------------------------------------------------------------------

struct NsgaConfig {
    long num_samples = 0;             // N, the total sample budget
    std::optional<double> eta0;       // absent: use the default formula
    double eta0_scale = 1.0;          // multiplier on the default eta0
    std::optional<long> decay_phase;  // T1; absent: floor(N / ln N), min 1
    Selection selection = HoldoutSelection{};
    Preprocess preprocess = RandomUnitPreprocess{};
    long trace_every = 1;
    bool trace_errors = false;  // extract the eigenvector at every traced step
};

/// Step t exhausted with a vanished parameter norm.
class NumericalCollapseError : public std::runtime_error {
public:
    NumericalCollapseError(long step, RunTrace trace);
    long step;
    RunTrace trace;
};

/// Non-finite entries appeared in the parameter (eta0 too large).
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(long step, RunTrace trace);
    long step;
    RunTrace trace;
};

/// alpha(v, W) = v^T W v / ||W||_F, the scale-free overlap with v v^T.
double alignment(const UnitVector& v, const SquareMatrix& w);

/// min{||v - u||^2, ||v + u||^2} = 2 - 2|<v, u>| for unit vectors.
double recovery_error(const UnitVector& vhat, const UnitVector& vstar);

/// eta0 * 2^{-floor(t / t1)}: constant on [0, T1), halved at T1, 2*T1, ...
double step_schedule(long t, double eta0, long t1);

long default_decay_phase(long num_samples);

struct Eta0Breakdown {
    double log_branch = 0.0;  // ln(N) / k
    double dim_branch = 0.0;  // k d^{k/4-1} / max{k(k-4), 1/ln d}
    double value = 0.0;
};

/// Default initial step size for even k (proportionality constant 1):
/// max{ln N / k, k d^{k/4-1} / max{k(k-4), 1/ln d}} * ceil(ln N) / (lambda N).
Eta0Breakdown default_eta0_even(int d, int k, double lambda, long num_samples);

/// Default initial step size for odd k: the even-k formula at effective order
/// k-1 with the SNR lambda * |<v*, u>| replaced by its preprocessing-dependent
/// surrogate (d^{-1/4} for the partial-trace vector, d^{-1/2} for a random u).
Eta0Breakdown default_eta0_odd(int d, int k, double lambda, long num_samples,
                               const Preprocess& preprocess);

/// lambda * <v*, u>, the signal strength of the mode-1 contracted tensor.
/// Diagnostic only: uses the ground truth.
double effective_snr(double lambda, const UnitVector& vstar, const UnitVector& u);

/// One NSGA update in place on an even-order observation; equivalent to one
/// stochastic gradient ascent step on reward / ||W||_F^{k/2-2}. reward_sign
/// -1 gives the descending instance of the bi-threaded variant. Returns the
/// signed reward sample.
double nsga_step(SquareMatrix& w, const DenseTensor& t_even, double eta,
                 double reward_sign = 1.0);

/// Normalized stochastic gradient ascent with matrix overparameterization,
/// for even k >= 4. Returns the top eigenvector of W^(N) + (W^(N))^T.
RecoveryResult nsga_even(ObservationStream& stream, const NsgaConfig& cfg);

/// Bi-threaded variant for odd k >= 5: both instances step on the same
/// mode-1 contracted observation, one ascending the reward and one descending,
/// which resolves the unknown sign of the effective SNR.
RecoveryResult nsga_odd(ObservationStream& stream, const NsgaConfig& cfg);

}  // namespace tpca
