// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/eigensolver.hpp"

#include <cmath>

namespace tpca {

namespace {

void matvec(const SquareMatrix& m, const std::vector<double>& v, std::vector<double>& out) {
    const int d = m.dim();
    for (int i = 0; i < d; ++i) {
        const double* row = m.data().data() + static_cast<std::size_t>(i) * d;
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += row[j] * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
}

}  // namespace

EigenConvergenceError::EigenConvergenceError(std::vector<double> last, double value, long iters)
    : std::runtime_error("power iteration did not converge within " +
                         std::to_string(iters) + " iterations"),
      last_iterate(std::move(last)),
      last_value(value),
      iterations(iters) {}

EigenResult sym_top_eigenvector(const SquareMatrix& m, double tol, long max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("sym_top_eigenvector: tol must be > 0");
    const int d = m.dim();
    double max_abs = 0.0;
    for (double x : m.data()) max_abs = std::max(max_abs, std::abs(x));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-10 * std::max(1.0, max_abs))
                throw std::invalid_argument("sym_top_eigenvector: matrix not symmetric");

    const double fro = m.frobenius_norm();
    const double shift = fro;

    std::vector<double> v(static_cast<std::size_t>(d), 1.0 / std::sqrt(static_cast<double>(d)));
    std::vector<double> mv(static_cast<std::size_t>(d));

    // A start that is already an eigenvector cannot rotate toward the
    // dominant one; nudge it deterministically.
    matvec(m, v, mv);
    {
        const double rho = dot(mv, v);
        double resid = 0.0;
        for (int i = 0; i < d; ++i) {
            const double r = mv[static_cast<std::size_t>(i)] - rho * v[static_cast<std::size_t>(i)];
            resid += r * r;
        }
        if (std::sqrt(resid) <= 1e-14 * std::max(1.0, fro)) {
            v[0] += 1.0;
            const double n = norm2(v);
            for (double& x : v) x /= n;
            matvec(m, v, mv);
        }
    }

    double theta = 0.0;
    for (long it = 0; it < max_iter; ++it) {
        theta = dot(mv, v);
        double resid = 0.0;
        for (int i = 0; i < d; ++i) {
            const double r = mv[static_cast<std::size_t>(i)] - theta * v[static_cast<std::size_t>(i)];
            resid += r * r;
        }
        if (std::sqrt(resid) <= tol * fro)
            return EigenResult{UnitVector::normalized(v), theta, it};

        // next iterate: normalize (M + shift I) v
        double n = 0.0;
        for (int i = 0; i < d; ++i) {
            mv[static_cast<std::size_t>(i)] += shift * v[static_cast<std::size_t>(i)];
            n += mv[static_cast<std::size_t>(i)] * mv[static_cast<std::size_t>(i)];
        }
        n = std::sqrt(n);
        if (n == 0.0) throw EigenConvergenceError(std::move(v), theta, it);
        for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = mv[static_cast<std::size_t>(i)] / n;
        matvec(m, v, mv);
    }
    throw EigenConvergenceError(std::move(v), theta, max_iter);
}

}  // namespace tpca
