// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "tensorpca/stream.hpp"

namespace tpca {

SquareMatrix fd_gradient_matrix(const DenseTensor& t, const SquareMatrix& w, double h) {
    if (h <= 0.0) throw std::invalid_argument("fd_gradient_matrix: h must be > 0");
    const int d = w.dim();
    SquareMatrix g(d);
    SquareMatrix probe = w;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double orig = probe(i, j);
            probe(i, j) = orig + h;
            const double fp = contract_matrix_power(t, probe);
            probe(i, j) = orig - h;
            const double fm = contract_matrix_power(t, probe);
            probe(i, j) = orig;
            g(i, j) = (fp - fm) / (2.0 * h);
        }
    }
    return g;
}

double alpha_first_order_term(const SquareMatrix& w, const SquareMatrix& q,
                              const UnitVector& v) {
    if (w.dim() != q.dim() || w.dim() != v.dim())
        throw std::invalid_argument("alpha_first_order_term: dim mismatch");
    const double fro = w.frobenius_norm();
    if (fro == 0.0) throw std::invalid_argument("alpha_first_order_term: zero matrix");
    const double vqv = q.quad_form(v.data());
    const double vwv = w.quad_form(v.data());
    const double wq = SquareMatrix::inner(w, q);
    return vqv / fro - vwv * wq / (fro * fro * fro);
}

namespace {

// Random unit direction in R^n.
std::vector<double> unit_direction(std::size_t n, Rng& rng) {
    std::vector<double> u(n);
    double n2 = 0.0;
    do {
        for (double& x : u) x = rng.next_gaussian();
        n2 = dot(u, u);
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : u) x *= inv;
    return u;
}

}  // namespace

CheckReport noise_moment_check(const NoiseModel& model, int d, int k, long n_samples,
                               int directions, std::uint64_t seed) {
    if (n_samples < 1000)
        throw std::invalid_argument("noise_moment_check: n_samples must be >= 1000");
    if (directions < 1)
        throw std::invalid_argument("noise_moment_check: directions must be >= 1");
    const std::size_t n = tensor_element_count(d, k, kDefaultElementBudget);
    Rng dir_rng(derive_seed(seed, {kSeedTagCheck, 1}));
    Rng noise_rng(derive_seed(seed, {kSeedTagCheck, 2}));

    std::vector<std::vector<double>> dirs;
    dirs.reserve(static_cast<std::size_t>(directions));
    for (int j = 0; j < directions; ++j) dirs.push_back(unit_direction(n, dir_rng));

    std::vector<double> second_moment(static_cast<std::size_t>(directions), 0.0);
    std::vector<double> noise(n);
    for (long s = 0; s < n_samples; ++s) {
        for (double& x : noise) x = model.sample(noise_rng);
        for (int j = 0; j < directions; ++j) {
            const double proj = dot(dirs[static_cast<std::size_t>(j)], noise);
            second_moment[static_cast<std::size_t>(j)] += proj * proj;
        }
    }
    for (double& m : second_moment) m /= static_cast<double>(n_samples);

    const double sigma2 = model.sigma * model.sigma;
    const double eps = std::max(0.05, 5.0 * std::sqrt(2.0 / static_cast<double>(n_samples)));
    CheckReport rep;
    rep.name = "noise_moment/" + noise_kind_name(model.kind);
    rep.trials = n_samples;
    rep.tolerance = eps;
    double max_est = 0.0;
    double max_rel = 0.0;
    for (double m : second_moment) {
        max_est = std::max(max_est, m);
        if (sigma2 > 0.0) max_rel = std::max(max_rel, std::abs(m - sigma2) / sigma2);
    }
    rep.max_abs_error = sigma2 > 0.0 ? max_rel * sigma2 : max_est;
    rep.max_rel_error = max_rel;
    rep.pass = (max_est <= 4.0 * sigma2 * 1.05) && (max_rel <= eps);
    if (sigma2 == 0.0) rep.pass = max_est == 0.0;
    return rep;
}

CheckReport subgaussian_tail_check(const NoiseModel& model, int d, int k, long n_samples,
                                   std::uint64_t seed) {
    if (n_samples < 10000)
        throw std::invalid_argument("subgaussian_tail_check: n_samples must be >= 10000");
    const std::size_t n = tensor_element_count(d, k, kDefaultElementBudget);
    Rng dir_rng(derive_seed(seed, {kSeedTagCheck, 3}));
    Rng noise_rng(derive_seed(seed, {kSeedTagCheck, 4}));
    const std::vector<double> u = unit_direction(n, dir_rng);

    const double sigma = model.sigma;
    long exceed[3] = {0, 0, 0};
    std::vector<double> noise(n);
    for (long s = 0; s < n_samples; ++s) {
        for (double& x : noise) x = model.sample(noise_rng);
        const double proj = std::abs(dot(u, noise));
        for (int r = 0; r < 3; ++r)
            if (proj > (r + 1) * sigma) ++exceed[r];
    }

    CheckReport rep;
    rep.name = "subgaussian_tail/" + noise_kind_name(model.kind);
    rep.trials = n_samples;
    rep.tolerance = 1.0;
    double worst_ratio = 0.0;
    double worst_abs = 0.0;
    for (int r = 0; r < 3; ++r) {
        const double p = static_cast<double>(exceed[r]) / static_cast<double>(n_samples);
        const double rr = static_cast<double>(r + 1);
        const double bound = 2.0 * std::exp(-rr * rr / 8.0) * 1.5;
        worst_ratio = std::max(worst_ratio, p / bound);
        worst_abs = std::max(worst_abs, p - bound);
    }
    rep.max_rel_error = worst_ratio;
    rep.max_abs_error = worst_abs;
    rep.pass = worst_ratio <= 1.0;
    return rep;
}

CheckReport gradient_check_suite(int d, int k, int trials, std::uint64_t seed, double h,
                                 double tolerance) {
    if (k < 2 || k % 2 != 0)
        throw std::invalid_argument("gradient_check_suite: k must be even and >= 2");
    if (trials < 1) throw std::invalid_argument("gradient_check_suite: trials must be >= 1");
    Rng rng(derive_seed(seed, {kSeedTagCheck, 5}));
    const std::size_t n = tensor_element_count(d, k, kDefaultElementBudget);

    CheckReport rep;
    rep.name = "reward_gradient_vs_fd";
    rep.trials = trials;
    rep.tolerance = tolerance;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> data(n);
        for (double& x : data) x = rng.next_gaussian();
        const DenseTensor t = DenseTensor::from_flat(k, d, std::move(data));
        SquareMatrix w(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) w(i, j) = rng.next_gaussian();

        const SquareMatrix g = reward_gradient(t, w);
        const SquareMatrix fd = fd_gradient_matrix(t, w, h);
        double max_abs = 0.0;
        double scale = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                max_abs = std::max(max_abs, std::abs(g(i, j) - fd(i, j)));
                scale = std::max(scale, std::abs(g(i, j)));
            }
        const double rel = scale > 0.0 ? max_abs / scale : max_abs;
        rep.max_abs_error = std::max(rep.max_abs_error, max_abs);
        rep.max_rel_error = std::max(rep.max_rel_error, rel);
    }
    rep.pass = rep.max_rel_error <= tolerance;
    return rep;
}

}  // namespace tpca
