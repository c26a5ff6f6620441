// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "tensorpca/contract.hpp"
#include "tensorpca/optim.hpp"

using namespace tpca;

namespace {

StreamConfig stream_config(int d, int k, double lambda, double sigma, std::uint64_t seed) {
    StreamConfig c;
    c.d = d;
    c.k = k;
    c.lambda = lambda;
    c.noise = {NoiseKind::GaussianIID, sigma};
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("alignment identities") {
    Rng rng(300);
    const UnitVector v = oracle::random_unit(9, rng);
    CHECK(std::abs(alignment(v, SquareMatrix::identity(9)) - 1.0 / 3.0) <= 1e-12);

    SquareMatrix outer(9);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) outer(i, j) = v[i] * v[j];
    CHECK(std::abs(alignment(v, outer) - 1.0) <= 1e-12);

    const SquareMatrix w = oracle::random_matrix(9, rng);
    SquareMatrix cw = w;
    for (double& x : cw.data()) x *= 3.7;
    CHECK(std::abs(alignment(v, cw) - alignment(v, w)) <= 1e-12);

    CHECK_THROWS_AS((void)alignment(v, SquareMatrix(9)), std::invalid_argument);
}

TEST_CASE("recovery_error closed form and sign invariance") {
    Rng rng(301);
    const UnitVector v = oracle::random_unit(6, rng);
    CHECK(recovery_error(v, v) <= 1e-12);
    CHECK(recovery_error(v.negated(), v) <= 1e-12);

    // orthogonal pair
    std::vector<double> a{1.0, 0.0, 0.0};
    std::vector<double> b{0.0, 1.0, 0.0};
    CHECK(recovery_error(UnitVector::from_unit(a), UnitVector::from_unit(b)) == 2.0);

    // non-unit inputs are rejected at the type boundary
    std::vector<double> long_vec{2.0, 0.0, 0.0};
    CHECK_THROWS_AS((void)UnitVector::from_unit(long_vec), std::invalid_argument);
}

TEST_CASE("step_schedule halves geometrically and bitwise exactly") {
    const double eta0 = 0.05;
    const long t1 = 263;
    CHECK(step_schedule(0, eta0, t1) == eta0);
    CHECK(step_schedule(t1 - 1, eta0, t1) == eta0);
    CHECK(step_schedule(t1, eta0, t1) == eta0 / 2.0);
    CHECK(step_schedule(2 * t1, eta0, t1) == eta0 / 4.0);

    Rng rng(302);
    for (int trial = 0; trial < 100; ++trial) {
        const double e = rng.next_unit() + 1e-3;
        const long phase = 1 + static_cast<long>(rng.next_u64() % 500);
        // halvings capped so the halved value stays normal (no underflow)
        const long t = static_cast<long>(rng.next_u64() % (512 * phase));
        const double eta = step_schedule(t, e, phase);
        CHECK(std::ldexp(eta, static_cast<int>(t / phase)) == e);
    }
}

TEST_CASE("default_decay_phase uses floor(N / ln N) with minimum 1") {
    CHECK(default_decay_phase(2000) == 263);
    CHECK(default_decay_phase(2) == 1);
    CHECK(default_decay_phase(1) == 1);
    CHECK(default_decay_phase(10000) == 1085);
}

TEST_CASE("default_eta0_even: k=4 dimension branch is 4 ln d") {
    for (int d : {4, 16, 100}) {
        const Eta0Breakdown b = default_eta0_even(d, 4, 1.0, 1000);
        CHECK(std::abs(b.dim_branch - 4.0 * std::log(static_cast<double>(d))) <= 1e-12);
    }
}

TEST_CASE("default_eta0_even pinned regression value") {
    // independent evaluation of the formula at d=16, k=4, lambda=1, N=1e4:
    // max{ln(1e4)/4 = 2.302585..., 4 ln 16 = 11.0903548889591...} * 10 / 1e4
    const Eta0Breakdown b = default_eta0_even(16, 4, 1.0, 10000);
    CHECK(std::abs(b.value - 0.011090354888959125) <= 1e-15);
}

TEST_CASE("default_eta0_even decreases when N grows") {
    const double small_n = default_eta0_even(16, 4, 1.0, 1000).value;
    const double large_n = default_eta0_even(16, 4, 1.0, 1000000).value;
    CHECK(large_n < small_n);
}

TEST_CASE("one noiseless NSGA step from identity has the closed form") {
    // k=4: shift coefficient k-4 = 0, ||W||^{k/2-2} = 1, so W1 = I + 2 eta lambda v v^T
    Rng rng(303);
    const int d = 6;
    const double lambda = 1.3;
    const double eta = 0.01;
    const UnitVector v = oracle::random_unit(d, rng);
    DenseTensor t = rank_one_tensor(v.data(), 4);
    for (double& x : t.data()) x *= lambda;

    SquareMatrix w = SquareMatrix::identity(d);
    const double reward = nsga_step(w, t, eta);
    CHECK(std::abs(reward - lambda) <= 1e-10);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double expect = (i == j ? 1.0 : 0.0) + 2.0 * eta * lambda * v[i] * v[j];
            CHECK(std::abs(w(i, j) - expect) <= 1e-12);
        }
}

TEST_CASE("one NSGA step is a gradient step on the normalized reward") {
    // (W' - W) / eta must equal the analytic gradient of R(W)/||W||^{k/2-2}
    Rng rng(304);
    for (int m : {2, 3}) {
        const int d = 4;
        const int k_eff = 2 * m;
        const DenseTensor t = oracle::random_tensor(k_eff, d, rng);
        const SquareMatrix w0 = oracle::random_matrix(d, rng);
        const double eta = 1e-3;

        SquareMatrix w1 = w0;
        (void)nsga_step(w1, t, eta);

        const double fro = w0.frobenius_norm();
        const double r = contract_matrix_power(t, w0);
        const SquareMatrix g = reward_gradient(t, w0);
        const int p = k_eff / 2 - 2;
        double max_diff = 0.0;
        double scale = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double analytic = g(i, j) / std::pow(fro, p) -
                                        p * r * w0(i, j) / std::pow(fro, p + 2);
                const double observed = (w1(i, j) - w0(i, j)) / eta;
                max_diff = std::max(max_diff, std::abs(observed - analytic));
                scale = std::max(scale, std::abs(analytic));
            }
        CHECK(max_diff <= 1e-9 * scale);
    }
}

TEST_CASE("noiseless NSGA converges and the alignment trace is monotone") {
    ObservationStream stream(stream_config(12, 4, 1.0, 0.0, 42));
    NsgaConfig cfg;
    cfg.num_samples = 2000;
    cfg.eta0 = 0.05;
    cfg.trace_every = 1;
    const RecoveryResult res = nsga_even(stream, cfg);
    CHECK(res.error <= 1e-6);
    CHECK(res.samples_used == 2000);

    REQUIRE(res.trace.records.size() == 2001);
    CHECK(std::abs(res.trace.records[0].alpha - 1.0 / std::sqrt(12.0)) <= 1e-12);
    for (std::size_t i = 1; i < res.trace.records.size(); ++i)
        CHECK(res.trace.records[i].alpha >= res.trace.records[i - 1].alpha - 1e-15);
    CHECK(res.trace.records.back().alpha >= 1.0 - 1e-6);
}

TEST_CASE("noiseless NSGA also converges at k=6 where the shift term is active") {
    ObservationStream stream(stream_config(6, 6, 1.0, 0.0, 43));
    NsgaConfig cfg;
    cfg.num_samples = 500;
    cfg.eta0 = 0.02;
    cfg.trace_every = 1;
    const RecoveryResult res = nsga_even(stream, cfg);
    CHECK(res.error <= 1e-6);
    for (std::size_t i = 1; i < res.trace.records.size(); ++i)
        CHECK(res.trace.records[i].alpha >= res.trace.records[i - 1].alpha - 1e-15);
}

TEST_CASE("bi-threaded NSGA handles k=7 (nonzero shift coefficient)") {
    ObservationStream stream(stream_config(5, 7, 1.0, 0.0, 44));
    NsgaConfig cfg;
    cfg.num_samples = 600;
    cfg.eta0 = 0.02;
    cfg.selection = HoldoutSelection{};
    cfg.preprocess = GivenPreprocess{stream.signal()};
    const RecoveryResult res = nsga_odd(stream, cfg);
    CHECK(res.error <= 1e-6);
    CHECK(res.selected_instance == 1);
}

TEST_CASE("initial alignment is exactly d^{-1/2}") {
    for (int d : {4, 9, 16, 25}) {
        ObservationStream stream(stream_config(d, 4, 1.0, 0.0, 50 + d));
        NsgaConfig cfg;
        cfg.num_samples = 1;
        cfg.eta0 = 0.01;
        const RecoveryResult res = nsga_even(stream, cfg);
        CHECK(std::abs(res.trace.records[0].alpha - 1.0 / std::sqrt(static_cast<double>(d))) <=
              1e-12);
    }
}

TEST_CASE("alignment trace stays within [-1, 1] on noisy runs") {
    ObservationStream stream(stream_config(6, 4, 2.0, 1.0, 51));
    NsgaConfig cfg;
    cfg.num_samples = 400;
    cfg.trace_every = 1;
    const RecoveryResult res = nsga_even(stream, cfg);
    for (const TraceRecord& r : res.trace.records) {
        CHECK(r.alpha >= -1.0);
        CHECK(r.alpha <= 1.0);
    }
}

TEST_CASE("even-k runs are sign-equivariant in the planted vector") {
    Rng rng(305);
    const UnitVector v = oracle::random_unit(6, rng);
    StreamConfig plus = stream_config(6, 4, 1.5, 1.0, 52);
    plus.signal = v;
    StreamConfig minus = plus;
    minus.signal = v.negated();

    NsgaConfig cfg;
    cfg.num_samples = 300;
    ObservationStream sp(plus);
    ObservationStream sm(minus);
    const RecoveryResult rp = nsga_even(sp, cfg);
    const RecoveryResult rm = nsga_even(sm, cfg);
    CHECK(rp.error == rm.error);
    CHECK(rp.estimate.vec() == rm.estimate.vec());
}

TEST_CASE("nsga_even rejects odd k and bad configs") {
    ObservationStream odd(stream_config(6, 5, 1.0, 0.0, 53));
    NsgaConfig cfg;
    cfg.num_samples = 10;
    cfg.eta0 = 0.01;
    CHECK_THROWS_AS((void)nsga_even(odd, cfg), std::invalid_argument);

    ObservationStream even(stream_config(6, 4, 1.0, 0.0, 54));
    NsgaConfig bad;
    bad.num_samples = 0;
    CHECK_THROWS_AS((void)nsga_even(even, bad), std::invalid_argument);
    NsgaConfig bad2;
    bad2.num_samples = 10;
    bad2.eta0 = -1.0;
    CHECK_THROWS_AS((void)nsga_even(even, bad2), std::invalid_argument);
}

TEST_CASE("nsga_even diverges loudly when eta0 is absurd") {
    ObservationStream stream(stream_config(6, 4, 1.0, 1.0, 55));
    NsgaConfig cfg;
    cfg.num_samples = 5000;
    cfg.eta0 = 1e150;
    CHECK_THROWS_AS((void)nsga_even(stream, cfg), DivergenceError);
}

TEST_CASE("bi-threaded NSGA: the instance matching sign(<v*,u>) recovers") {
    for (const double sign : {1.0, -1.0}) {
        ObservationStream stream(stream_config(10, 5, 1.0, 0.0, 56));
        NsgaConfig cfg;
        cfg.num_samples = 1200;
        cfg.eta0 = 0.05;
        cfg.selection = HoldoutSelection{};
        const UnitVector u = sign > 0 ? stream.signal() : stream.signal().negated();
        cfg.preprocess = GivenPreprocess{u};
        const RecoveryResult res = nsga_odd(stream, cfg);

        REQUIRE(res.candidates.size() == 4);
        const double err1 = recovery_error(res.candidates[0], stream.signal());
        const double err2 = recovery_error(res.candidates[2], stream.signal());
        if (sign > 0) {
            CHECK(err1 <= 1e-6);
            CHECK(err2 > err1 + 0.5);
            CHECK(res.selected_instance == 1);
        } else {
            CHECK(err2 <= 1e-6);
            CHECK(err1 > err2 + 0.5);
            CHECK(res.selected_instance == 2);
        }
        CHECK(res.error <= 1e-6);
        CHECK(res.samples_used == 1200);
    }
}

TEST_CASE("selected candidate error dominates the best candidate error") {
    ObservationStream stream(stream_config(8, 5, 2.0, 1.0, 57));
    NsgaConfig cfg;
    cfg.num_samples = 600;
    cfg.selection = HoldoutSelection{};
    cfg.preprocess = PartialTracePreprocess{64};
    const RecoveryResult res = nsga_odd(stream, cfg);
    double best = 2.0;
    for (const UnitVector& c : res.candidates)
        best = std::min(best, recovery_error(c, stream.signal()));
    CHECK(best <= res.error + 1e-12);
}

TEST_CASE("random-pick selection is deterministic given the seed") {
    auto run = [](std::uint64_t seed) {
        ObservationStream stream(stream_config(8, 5, 1.0, 0.0, seed));
        NsgaConfig cfg;
        cfg.num_samples = 200;
        cfg.eta0 = 0.05;
        cfg.selection = RandomPickSelection{};
        cfg.preprocess = RandomUnitPreprocess{};
        return nsga_odd(stream, cfg);
    };
    const RecoveryResult a = run(77);
    const RecoveryResult b = run(77);
    CHECK(a.selected_instance == b.selected_instance);
    CHECK(a.estimate.vec() == b.estimate.vec());
    CHECK(a.samples_used == 200);
}

TEST_CASE("effective_snr basics and isotropic concentration") {
    Rng rng(306);
    const UnitVector v = oracle::random_unit(5, rng);
    CHECK(effective_snr(2.0, v, v) == 2.0);

    std::vector<double> e1{1.0, 0.0, 0.0, 0.0, 0.0};
    std::vector<double> e2{0.0, 1.0, 0.0, 0.0, 0.0};
    CHECK(effective_snr(2.0, UnitVector::from_unit(e1), UnitVector::from_unit(e2)) == 0.0);

    const int d = 100;
    const double lambda = 2.0;
    const UnitVector vstar = oracle::random_unit(d, rng);
    std::vector<double> magnitudes;
    for (int trial = 0; trial < 1000; ++trial)
        magnitudes.push_back(std::abs(effective_snr(lambda, vstar, oracle::random_unit(d, rng))));
    std::sort(magnitudes.begin(), magnitudes.end());
    const double median = magnitudes[500];
    const double reference = lambda / std::sqrt(static_cast<double>(d));
    CHECK(median >= reference / 3.0);
    CHECK(median <= reference * 3.0);
}
