// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include "tensorpca/matrix.hpp"

namespace tpca {

struct EigenResult {
    UnitVector vector;
    double value = 0.0;
    long iterations = 0;
};

class EigenConvergenceError : public std::runtime_error {
public:
    EigenConvergenceError(std::vector<double> last, double value, long iters);
    std::vector<double> last_iterate;
    double last_value;
    long iterations;
};

/// Largest *signed* eigenvalue and its eigenvector of a symmetric matrix.
///
/// Power iteration on M + c*I with c = ||M||_F, which makes the top signed
/// eigenvalue the dominant one. Deterministic start (1,...,1)/sqrt(d); if the
/// start is already an eigenvector to 1e-14 (possibly a non-dominant one,
/// which power iteration cannot escape), it is perturbed by adding e_1 and
/// renormalizing. Converges when ||M v - theta v|| <= tol * ||M||_F with
/// theta = v^T M v.
EigenResult sym_top_eigenvector(const SquareMatrix& m, double tol = 1e-10,
                                long max_iter = 10000);

}  // namespace tpca
