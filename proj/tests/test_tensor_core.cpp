// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "tensorpca/contract.hpp"
#include "tensorpca/eigensolver.hpp"
#include "tensorpca/tensor_io.hpp"

using namespace tpca;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double matrix_rel_error(const SquareMatrix& got, const SquareMatrix& expect) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < got.data().size(); ++i) {
        diff = std::max(diff, std::abs(got.data()[i] - expect.data()[i]));
        scale = std::max(scale, std::abs(expect.data()[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

TEST_CASE("flat_index matches the lexicographic formula") {
    const std::vector<int> idx23{2, 3};
    CHECK(flat_index(idx23, 3) == 6);
    const std::vector<int> ones{1, 1, 1, 1};
    CHECK(flat_index(ones, 5) == 1);
    const std::vector<int> last{5, 5, 5, 5};
    CHECK(flat_index(last, 5) == 625);

    const std::vector<int> bad{0, 1};
    CHECK_THROWS_AS((void)flat_index(bad, 3), std::out_of_range);
    const std::vector<int> bad2{1, 4};
    CHECK_THROWS_AS((void)flat_index(bad2, 3), std::out_of_range);
}

TEST_CASE("flat_index is a bijection (exhaustive for d <= 3, k <= 4)") {
    for (int d = 1; d <= 3; ++d) {
        for (int k = 1; k <= 4; ++k) {
            const std::size_t n = tensor_element_count(d, k, kDefaultElementBudget);
            std::vector<bool> seen(n, false);
            std::vector<int> idx(static_cast<std::size_t>(k), 1);
            for (std::size_t count = 0; count < n; ++count) {
                const std::size_t pos = flat_index(idx, d);
                REQUIRE(pos >= 1);
                REQUIRE(pos <= n);
                REQUIRE_FALSE(seen[pos - 1]);
                seen[pos - 1] = true;
                CHECK(multi_index_from_flat(pos, d, k) == idx);
                for (int m = k - 1; m >= 0; --m) {
                    if (++idx[static_cast<std::size_t>(m)] <= d) break;
                    idx[static_cast<std::size_t>(m)] = 1;
                }
            }
        }
    }
}

TEST_CASE("flat_index round-trips 1000 random multi-indices") {
    Rng rng(11);
    const int d = 6;
    const int k = 5;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int& x : idx) x = 1 + static_cast<int>(rng.next_u64() % d);
        CHECK(multi_index_from_flat(flat_index(idx, d), d, k) == idx);
    }
}

TEST_CASE("rank_one_tensor of a basis vector is a single one") {
    std::vector<double> e1{1.0, 0.0, 0.0};
    const DenseTensor t = rank_one_tensor(e1, 4);
    CHECK(t.data()[0] == 1.0);
    double sum = 0.0;
    for (double x : t.data()) sum += std::abs(x);
    CHECK(sum == 1.0);
}

TEST_CASE("rank_one_tensor norm is ||v||^k") {
    Rng rng(12);
    for (int k : {3, 4, 5}) {
        const std::vector<double> v = oracle::random_vector(4, rng);
        const DenseTensor t = rank_one_tensor(v, k);
        const double expect = std::pow(norm2(v), k);
        CHECK(std::abs(t.frobenius_norm() - expect) <= 1e-12 * expect);
    }
}

TEST_CASE("<u^k, v^k> = <u,v>^k at d=4, k=4") {
    Rng rng(13);
    const std::vector<double> u = oracle::random_vector(4, rng);
    const std::vector<double> v = oracle::random_vector(4, rng);
    const DenseTensor tu = rank_one_tensor(u, 4);
    const DenseTensor tv = rank_one_tensor(v, 4);
    const double brute = oracle::nested_inner_order4(tu, tv);
    const double expect = std::pow(dot(u, v), 4);
    CHECK(std::abs(tensor_inner(tu, tv) - expect) <= 1e-10 * std::abs(expect));
    CHECK(std::abs(brute - expect) <= 1e-10 * std::abs(expect));
}

TEST_CASE("element budget is enforced") {
    CHECK_THROWS_AS(DenseTensor(30, 3), BudgetExceededError);
    CHECK_THROWS_AS(DenseTensor(2, 3, 8), BudgetExceededError);  // 9 > 8
    std::vector<double> v(64, 0.1);
    CHECK_THROWS_AS((void)rank_one_tensor(v, 8), BudgetExceededError);  // 64^8 > 2^27
}

TEST_CASE("tensor_inner basics and the nested-loop oracle") {
    Rng rng(14);
    const DenseTensor t = oracle::random_tensor(4, 3, rng);
    const double fro = t.frobenius_norm();
    CHECK(std::abs(tensor_inner(t, t) - fro * fro) <= 1e-12 * fro * fro);

    const UnitVector v = oracle::random_unit(5, rng);
    const DenseTensor tv = rank_one_tensor(v.data(), 4);
    DenseTensor scaled = DenseTensor::from_flat(
        4, 5, std::vector<double>(tv.data().begin(), tv.data().end()));
    for (double& x : scaled.data()) x *= 2.5;
    CHECK(std::abs(tensor_inner(tv, scaled) - 2.5) <= 1e-10);

    const DenseTensor a = oracle::random_tensor(4, 3, rng);
    const DenseTensor b = oracle::random_tensor(4, 3, rng);
    CHECK(std::abs(tensor_inner(a, b) - oracle::nested_inner_order4(a, b)) <= 1e-12);

    const DenseTensor c = oracle::random_tensor(3, 3, rng);
    CHECK_THROWS_AS((void)tensor_inner(a, c), std::invalid_argument);
}

TEST_CASE("contract_matrix_power equals (v^T W v)^m on rank-one tensors") {
    Rng rng(15);
    const std::vector<double> v = oracle::random_vector(4, rng);
    const SquareMatrix w = oracle::random_matrix(4, rng);
    const DenseTensor t = rank_one_tensor(v, 4);
    const double vwv = w.quad_form(v);
    CHECK(std::abs(contract_matrix_power(t, w) - vwv * vwv) <= 1e-10 * vwv * vwv + 1e-12);
}

TEST_CASE("contract_matrix_power identity and noiseless-signal cases") {
    std::vector<double> e1{1.0, 0.0, 0.0, 0.0};
    const DenseTensor t = rank_one_tensor(e1, 4);
    const SquareMatrix id = SquareMatrix::identity(4);
    CHECK(contract_matrix_power(t, id) == 1.0);

    Rng rng(16);
    const UnitVector vstar = oracle::random_unit(5, rng);
    DenseTensor signal = rank_one_tensor(vstar.data(), 4);
    const double lambda = 2.75;
    for (double& x : signal.data()) x *= lambda;
    CHECK(std::abs(contract_matrix_power(signal, SquareMatrix::identity(5)) - lambda) <=
          1e-10 * lambda);
}

TEST_CASE("contract_matrix_power is degree-m homogeneous in W") {
    Rng rng(17);
    const DenseTensor t = oracle::random_tensor(6, 3, rng);
    const SquareMatrix w = oracle::random_matrix(3, rng);
    SquareMatrix cw = w;
    const double c = 1.7;
    for (double& x : cw.data()) x *= c;
    const double base = contract_matrix_power(t, w);
    CHECK(std::abs(contract_matrix_power(t, cw) - c * c * c * base) <=
          1e-10 * std::abs(base) * c * c * c);
}

TEST_CASE("contract_matrix_power rejects odd order and dim mismatch") {
    Rng rng(18);
    const DenseTensor odd = oracle::random_tensor(3, 3, rng);
    CHECK_THROWS_AS((void)contract_matrix_power(odd, SquareMatrix::identity(3)),
                    std::invalid_argument);
    const DenseTensor even = oracle::random_tensor(4, 3, rng);
    CHECK_THROWS_AS((void)contract_matrix_power(even, SquareMatrix::identity(4)),
                    std::invalid_argument);
}

TEST_CASE("reward_gradient on a scaled rank-one tensor has the closed form") {
    Rng rng(19);
    const std::vector<double> v = oracle::random_vector(4, rng);
    const SquareMatrix w = oracle::random_matrix(4, rng);
    const double lambda = 1.4;
    DenseTensor t = rank_one_tensor(v, 4);
    for (double& x : t.data()) x *= lambda;

    const double vwv = w.quad_form(v);
    SquareMatrix expect(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            expect(i, j) = lambda * 2.0 * vwv * v[static_cast<std::size_t>(i)] *
                           v[static_cast<std::size_t>(j)];
    CHECK(matrix_rel_error(reward_gradient(t, w), expect) <= 1e-10);
}

TEST_CASE("reward_gradient at m=1 is the matricization of T") {
    Rng rng(20);
    const DenseTensor t = oracle::random_tensor(2, 5, rng);
    const SquareMatrix g = reward_gradient(t, oracle::random_matrix(5, rng));
    CHECK(max_abs_diff(g.data(), t.data()) == 0.0);
}

TEST_CASE("reward_gradient matches central finite differences") {
    Rng rng(21);
    for (const auto& [d, m] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {3, 3}, {5, 2}}) {
        const DenseTensor t = oracle::random_tensor(2 * m, d, rng);
        const SquareMatrix w = oracle::random_matrix(d, rng);
        const SquareMatrix g = reward_gradient(t, w);

        const double h = 1e-5;
        SquareMatrix fd(d);
        SquareMatrix probe = w;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double orig = probe(i, j);
                probe(i, j) = orig + h;
                const double fp = contract_matrix_power(t, probe);
                probe(i, j) = orig - h;
                const double fm = contract_matrix_power(t, probe);
                probe(i, j) = orig;
                fd(i, j) = (fp - fm) / (2.0 * h);
            }
        CHECK(matrix_rel_error(g, fd) <= 1e-5);
    }
}

TEST_CASE("mode1_contract of a rank-one tensor rescales the lower power") {
    Rng rng(22);
    const std::vector<double> v = oracle::random_vector(4, rng);
    const std::vector<double> u = oracle::random_vector(4, rng);
    const DenseTensor t = rank_one_tensor(v, 5);
    const DenseTensor got = mode1_contract(t, u);

    DenseTensor expect = rank_one_tensor(v, 4);
    const double c = dot(v, u);
    for (double& x : expect.data()) x *= c;
    CHECK(max_abs_diff(got.data(), expect.data()) <= 1e-12 * std::abs(c) + 1e-13);
}

TEST_CASE("mode1_contract with a basis vector extracts the first slice") {
    Rng rng(23);
    const DenseTensor t = oracle::random_tensor(4, 3, rng);
    std::vector<double> e2{0.0, 1.0, 0.0};
    const DenseTensor slice = mode1_contract(t, e2);
    const std::size_t block = slice.size();
    for (std::size_t q = 0; q < block; ++q)
        CHECK(slice.data()[q] == t.data()[block + q]);
}

TEST_CASE("mode1_contract exposes the principal slice term of the model") {
    Rng rng(24);
    const UnitVector vstar = oracle::random_unit(5, rng);
    const UnitVector u = oracle::random_unit(5, rng);
    const double lambda = 3.0;
    DenseTensor t = rank_one_tensor(vstar.data(), 5);
    for (double& x : t.data()) x *= lambda;

    const DenseTensor got = mode1_contract(t, u.data());
    DenseTensor expect = rank_one_tensor(vstar.data(), 4);
    const double snr = lambda * dot(vstar.data(), u.data());
    for (double& x : expect.data()) x *= snr;
    CHECK(max_abs_diff(got.data(), expect.data()) <= 1e-12);
}

TEST_CASE("mode1_contract is linear in both arguments") {
    Rng rng(25);
    const DenseTensor a = oracle::random_tensor(4, 3, rng);
    const DenseTensor b = oracle::random_tensor(4, 3, rng);
    const std::vector<double> u = oracle::random_vector(3, rng);
    const std::vector<double> w = oracle::random_vector(3, rng);

    DenseTensor apb = DenseTensor(4, 3);
    for (std::size_t i = 0; i < a.size(); ++i) apb.data()[i] = a.data()[i] + b.data()[i];
    const DenseTensor lhs = mode1_contract(apb, u);
    const DenseTensor ra = mode1_contract(a, u);
    const DenseTensor rb = mode1_contract(b, u);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        CHECK(std::abs(lhs.data()[i] - (ra.data()[i] + rb.data()[i])) <= 1e-12);

    std::vector<double> upw(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) upw[i] = u[i] + w[i];
    const DenseTensor lhs2 = mode1_contract(a, upw);
    const DenseTensor rw = mode1_contract(a, w);
    for (std::size_t i = 0; i < lhs2.size(); ++i)
        CHECK(std::abs(lhs2.data()[i] - (ra.data()[i] + rw.data()[i])) <= 1e-12);
}

TEST_CASE("partial_trace_vector collapses unit rank-one tensors") {
    Rng rng(26);
    const UnitVector v = oracle::random_unit(4, rng);
    const DenseTensor t = rank_one_tensor(v.data(), 5);
    const std::vector<double> got = partial_trace_vector(t);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(got[static_cast<std::size_t>(i)] - v[i]) <= 1e-12);
}

TEST_CASE("partial_trace_vector of zero is zero; kronecker-slice case sums to d*w") {
    const DenseTensor zero(5, 3);
    for (double x : partial_trace_vector(zero)) CHECK(x == 0.0);

    // k=3: T(i,j,l) = delta_jl * w_i
    Rng rng(27);
    const std::vector<double> w = oracle::random_vector(4, rng);
    DenseTensor t(3, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            t.data()[static_cast<std::size_t>(i) * 16 + static_cast<std::size_t>(j) * 4 +
                     static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(i)];
    const std::vector<double> got = partial_trace_vector(t);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(got[static_cast<std::size_t>(i)] - 4.0 * w[static_cast<std::size_t>(i)]) <=
              1e-12);

    const DenseTensor even(4, 3);
    CHECK_THROWS_AS((void)partial_trace_vector(even), std::invalid_argument);
}

TEST_CASE("sym_top_eigenvector on diagonal and rank-one matrices") {
    SquareMatrix diag(3);
    diag(0, 0) = 3.0;
    diag(1, 1) = 2.0;
    diag(2, 2) = 1.0;
    const EigenResult r = sym_top_eigenvector(diag);
    CHECK(std::abs(r.value - 3.0) <= 1e-8);
    CHECK(std::abs(std::abs(r.vector[0]) - 1.0) <= 1e-8);

    Rng rng(28);
    const UnitVector v = oracle::random_unit(6, rng);
    SquareMatrix outer(6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) outer(i, j) = v[i] * v[j];
    const EigenResult r2 = sym_top_eigenvector(outer);
    CHECK(std::abs(r2.value - 1.0) <= 1e-8);
    CHECK(std::abs(std::abs(dot(r2.vector.data(), v.data())) - 1.0) <= 1e-8);
}

TEST_CASE("sym_top_eigenvector matches a Jacobi oracle on random symmetric 8x8") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const SquareMatrix m = oracle::random_symmetric(8, rng);
        const EigenResult got = sym_top_eigenvector(m, 1e-12, 100000);

        const oracle::JacobiResult jac = oracle::jacobi_eigen(m);
        std::size_t top = 0;
        for (std::size_t j = 1; j < jac.values.size(); ++j)
            if (jac.values[j] > jac.values[top]) top = j;
        CHECK(std::abs(got.value - jac.values[top]) <= 1e-8);
        CHECK(std::abs(std::abs(dot(got.vector.data(), jac.vectors[top])) - 1.0) <= 1e-8);
    }
}

TEST_CASE("sym_top_eigenvector residual bound and unit output") {
    Rng rng(30);
    for (int trial = 0; trial < 10; ++trial) {
        const SquareMatrix m = oracle::random_symmetric(7, rng);
        const EigenResult r = sym_top_eigenvector(m);
        CHECK(std::abs(norm2(r.vector.data()) - 1.0) <= 1e-12);
        std::vector<double> mv(7, 0.0);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) mv[static_cast<std::size_t>(i)] += m(i, j) * r.vector[j];
        double resid = 0.0;
        for (int i = 0; i < 7; ++i) {
            const double x = mv[static_cast<std::size_t>(i)] - r.value * r.vector[i];
            resid += x * x;
        }
        CHECK(std::sqrt(resid) <= 1e-10 * m.frobenius_norm() * (1.0 + 1e-9));
    }
}

TEST_CASE("sym_top_eigenvector error paths") {
    SquareMatrix asym(2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS((void)sym_top_eigenvector(asym), std::invalid_argument);

    Rng rng(31);
    const SquareMatrix m = oracle::random_symmetric(5, rng);
    try {
        (void)sym_top_eigenvector(m, 1e-300, 3);
        FAIL("expected EigenConvergenceError");
    } catch (const EigenConvergenceError& e) {
        CHECK(e.last_iterate.size() == 5);
        CHECK(std::abs(norm2(e.last_iterate) - 1.0) <= 1e-9);
    }
}

TEST_CASE("tensor binary files round-trip bitwise") {
    Rng rng(32);
    const DenseTensor t = oracle::random_tensor(3, 4, rng);
    const auto path = std::filesystem::temp_directory_path() / "tpca_io_test.spkt";
    save_tensor(path, t);
    const DenseTensor back = load_tensor(path);
    CHECK(back.order() == 3);
    CHECK(back.dim() == 4);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.data()[i] == t.data()[i]);

    // corrupt the magic
    {
        std::ofstream f(path, std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(0);
        f.write("XXXX", 4);
    }
    CHECK_THROWS_AS((void)load_tensor(path), std::runtime_error);
    std::filesystem::remove(path);
}
