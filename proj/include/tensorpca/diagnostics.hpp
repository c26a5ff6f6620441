// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "tensorpca/contract.hpp"
#include "tensorpca/noise.hpp"

namespace tpca {

struct CheckReport {
    std::string name;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    long trials = 0;
    bool pass = false;
    double tolerance = 0.0;
};

/// Central-difference gradient of W -> <W^{(x)m}, T>, entrywise:
/// (f(W + h E_ij) - f(W - h E_ij)) / (2h). Oracle for reward_gradient.
SquareMatrix fd_gradient_matrix(const DenseTensor& t, const SquareMatrix& w, double h);

/// First-order term of alpha(v, W + eta Q) in eta:
/// s = v^T Q v / ||W||_F - (v^T W v) <W, Q> / ||W||_F^3.
double alpha_first_order_term(const SquareMatrix& w, const SquareMatrix& q,
                              const UnitVector& v);

/// Estimates E[<u, flat(E)>^2] along random unit directions u in R^{d^k}.
/// Passes iff every estimate is within sigma^2 * (1 +/- eps) with
/// eps = max(0.05, 5 sqrt(2 / n_samples)) and the largest is <= 4 sigma^2 * 1.05.
CheckReport noise_moment_check(const NoiseModel& model, int d, int k, long n_samples,
                               int directions, std::uint64_t seed);

/// Empirical tail of <u, flat(E)> at r in {sigma, 2 sigma, 3 sigma} against
/// the sub-Gaussian bound 2 exp(-r^2 / (8 sigma^2)) with Monte-Carlo slack 1.5.
CheckReport subgaussian_tail_check(const NoiseModel& model, int d, int k, long n_samples,
                                   std::uint64_t seed);

/// Random-instance comparison of reward_gradient against fd_gradient_matrix;
/// the relative error of a case is max|diff| / max|analytic|.
CheckReport gradient_check_suite(int d, int k, int trials, std::uint64_t seed,
                                 double h = 1e-5, double tolerance = 1e-5);

}  // namespace tpca
