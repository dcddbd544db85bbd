// SPDX-License-Identifier: Apache-2.0
//
// gkmimo - capacity bounds and link-level simulation for massive MIMO uplinks
// Copyright (C) 2026 The gkmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "gkmimo/bounds.hpp"
#include "gkmimo/error.hpp"
#include "gkmimo/simulator.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

using namespace gkmimo;

namespace
{
    SystemConfig defaults(int M = 128, double power_db = 10.0, double m = 3.3, int K = 9)
    {
        SystemConfig cfg;
        cfg.M = M;
        cfg.K = K;
        cfg.tau = K;
        cfg.geometry.users = K;
        cfg.fading = FadingParams::mean_normalized(m, 3.6);
        cfg.p_u = transmit_snr_from_db(power_db, 3.6);
        return cfg;
    }

    Eigen::MatrixXcd random_matrix(int rows, int cols, std::uint64_t seed)
    {
        RandomStream rng(seed, 0);
        Eigen::MatrixXcd A(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i)
                A(i, j) = rng.complex_normal();
        return A;
    }

    // Moore-Penrose pseudo-inverse through the SVD.
    Eigen::MatrixXcd pinv(const Eigen::MatrixXcd &A)
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd inv_s = svd.singularValues().cwiseInverse();
        return svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint();
    }

    bool bit_identical(const std::vector<double> &a, const std::vector<double> &b)
    {
        return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
    }
}

TEST_CASE("zf_sinr: single column and orthogonal columns")
{
    const Eigen::MatrixXcd g = random_matrix(6, 1, 1);
    const auto one = zf_sinr(g, 3.5);
    CHECK(one[0] == doctest::Approx(3.5 * g.squaredNorm()).epsilon(1e-13));

    Eigen::MatrixXcd Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(random_matrix(5, 3, 2)).householderQ() *
                         Eigen::MatrixXcd::Identity(5, 3);
    const std::vector<double> norms{0.5, 2.0, 7.0};
    for (int k = 0; k < 3; ++k)
        Q.col(k) *= norms[k];
    const auto s = zf_sinr(Q, 2.0);
    for (int k = 0; k < 3; ++k)
        CHECK(s[k] == doctest::Approx(2.0 * norms[k] * norms[k]).epsilon(1e-12));
}

TEST_CASE("zf_sinr matches a pseudo-inverse oracle")
{
    const Eigen::MatrixXcd G = random_matrix(8, 3, 3);
    const double p = 4.2;
    const Eigen::MatrixXcd A = pinv(G);
    const auto s = zf_sinr(G, p);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(s[k] - p / A.row(k).squaredNorm()) / s[k] < 1e-10);

    // Strongly unequal column scales: pinv(G S) = S^-1 pinv(G) for diagonal S.
    const std::vector<double> scale{1e-6, 1.0, 1e5};
    Eigen::MatrixXcd H = G;
    for (int k = 0; k < 3; ++k)
        H.col(k) *= scale[k];
    const auto h = zf_sinr(H, p);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(h[k] - p * scale[k] * scale[k] / A.row(k).squaredNorm()) / h[k] < 1e-10);
}

TEST_CASE("zf_sinr rejects rank-deficient channels")
{
    Eigen::MatrixXcd G = random_matrix(6, 3, 4);
    G.col(2) = G.col(0) * std::complex<double>(0.0, 2.0);
    CHECK_THROWS_AS(zf_sinr(G, 1.0), SingularChannelError);
    G.col(2).setZero();
    CHECK_THROWS_AS(zf_sinr(G, 1.0), SingularChannelError);
}

TEST_CASE("mismatched_zf_sinr: oracle and consistency")
{
    const Eigen::MatrixXcd G = random_matrix(10, 4, 5);
    Eigen::MatrixXcd E = random_matrix(10, 4, 6) * 0.3;
    const Eigen::MatrixXcd G_hat = G + E;
    const double p = 2.5;

    const auto same = mismatched_zf_sinr(G, G, p);
    const auto exact = zf_sinr(G, p);
    for (int k = 0; k < 4; ++k)
        CHECK(same[k] == doctest::Approx(exact[k]).epsilon(1e-11));

    // Filter rows a_k^H from the pseudo-inverse of the estimate.
    const Eigen::MatrixXcd A = pinv(G_hat);
    const Eigen::MatrixXcd T = A * G;
    const auto s = mismatched_zf_sinr(G, G_hat, p);
    for (int k = 0; k < 4; ++k)
    {
        double leak = 0.0;
        for (int i = 0; i < 4; ++i)
            if (i != k)
                leak += std::norm(T(k, i));
        const double oracle = p * std::norm(T(k, k)) / (p * leak + A.row(k).squaredNorm());
        CHECK(std::abs(s[k] - oracle) / oracle < 1e-10);
        CHECK(s[k] < same[k] * 1.5);
    }
}

TEST_CASE("MMSE estimate limits")
{
    SystemConfig cfg = defaults(16, 10.0, 3.3, 3);
    const std::vector<double> d{200.0, 500.0, 900.0};
    RandomStream rng(1, 0);
    const ChannelRealization ch = realize_channel(cfg, d, rng);

    cfg.p_u = 1e12 * std::pow(900.0, 3.6) * 1e6;
    RandomStream r1(1, 1);
    const Eigen::MatrixXcd hi = estimate_channel_mmse(ch, cfg, r1);
    for (int k = 0; k < 3; ++k)
        for (int n = 0; n < 16; ++n)
            CHECK(std::abs(hi(n, k) - ch.G(n, k)) <= 1e-4 * std::abs(ch.G(n, k)));

    cfg.p_u = 1e-30;
    RandomStream r2(1, 2);
    const Eigen::MatrixXcd lo = estimate_channel_mmse(ch, cfg, r2);
    CHECK(lo.cwiseAbs().maxCoeff() < 1e-20);

    cfg.p_u = 0.0;
    RandomStream r3(1, 3);
    CHECK(estimate_channel_mmse(ch, cfg, r3).isZero(0.0));
}

TEST_CASE("MMSE estimation error variance")
{
    SystemConfig cfg = defaults(8, 10.0, 3.3, 3);
    const std::vector<double> d{300.0, 500.0, 800.0};
    const std::vector<double> mu{1.0, 1.0, 1.0};
    // Pilot SNR tau p beta of order one for the middle user.
    cfg.p_u = 1.0 / (cfg.tau * std::pow(500.0, -3.6));
    std::vector<double> err(3, 0.0);
    std::vector<double> beta;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t)
    {
        RandomStream rng(21, t);
        const ChannelRealization ch = realize_channel(cfg, d, rng, {mu, std::nullopt});
        beta = ch.beta;
        const Eigen::MatrixXcd G_hat = estimate_channel_mmse(ch, cfg, rng);
        for (int k = 0; k < 3; ++k)
            err[k] += (G_hat.col(k) - ch.G.col(k)).squaredNorm() / cfg.M;
    }
    for (int k = 0; k < 3; ++k)
    {
        const double s = cfg.tau * cfg.p_u * beta[k];
        const double expected = beta[k] / (s + 1.0);
        CAPTURE(k);
        CHECK(std::abs(err[k] / trials - expected) / expected < 0.02);
        // The shrinkage factor itself is a different quantity.
        CHECK(std::abs(err[k] / trials - s / (s + 1.0)) / (s / (s + 1.0)) > 0.5);
    }
}

TEST_CASE("serial and parallel runs are bit-identical")
{
    const SystemConfig cfg = defaults(32, 10.0, 1.0);
    for (CsiMode mode : {CsiMode::Perfect, CsiMode::Imperfect})
    {
        const auto serial = trial_means(cfg, mode, 500, 17, Execution::Serial);
        for (int threads : {1, 2, 4, 7})
        {
            omp_set_num_threads(threads);
            const auto parallel = trial_means(cfg, mode, 500, 17, Execution::Parallel);
            CHECK(bit_identical(serial, parallel));
        }
    }
    omp_set_num_threads(1);
    const MonteCarloEstimate a = run_perfect_csi(cfg, 300, 5);
    const MonteCarloEstimate b = run_perfect_csi(cfg, 300, 5);
    CHECK(std::memcmp(&a.mean_bits, &b.mean_bits, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.ci_half_width, &b.ci_half_width, sizeof(double)) == 0);
    CHECK(a.trials == b.trials);
}

TEST_CASE("zero power gives zero capacity")
{
    SystemConfig cfg = defaults(32);
    cfg.p_u = 0.0;
    const MonteCarloEstimate p = run_perfect_csi(cfg, 200, 1);
    const MonteCarloEstimate i = run_imperfect_csi(cfg, 200, 1);
    CHECK(p.mean_bits == 0.0);
    CHECK(i.mean_bits == 0.0);
    CHECK(p.ci_half_width == 0.0);
}

TEST_CASE("smallest configuration still dominates the bound")
{
    const SystemConfig cfg = defaults(3, 10.0, 3.3, 2);
    const MonteCarloEstimate est = run_perfect_csi(cfg, 100000, 3);
    const double bound = bounds::cell_average_perfect(cfg).value;
    CHECK(est.mean_bits + est.ci_half_width >= bound);
    CHECK(est.mean_bits >= bound);
}

TEST_CASE("imperfect-CSI simulation dominates the simplified bound on the same draws")
{
    const SystemConfig cfg = defaults(64);
    const std::size_t trials = 10000;
    const std::uint64_t seed = 4;
    const MonteCarloEstimate sim = run_imperfect_csi(cfg, trials, seed);
    double bound = 0.0;
    for (std::size_t t = 0; t < trials; ++t)
    {
        RandomStream rng(seed, t);
        std::vector<double> d(cfg.K);
        for (auto &x : d)
            x = sample_user_distance(cfg.geometry, rng);
        const ChannelRealization ch = realize_channel(cfg, d, rng);
        double mean = 0.0;
        for (double b : ch.beta)
            mean += bounds::pointwise_bound_imperfect(b, cfg);
        bound += mean / cfg.K;
    }
    bound /= trials;
    CHECK(sim.mean_bits + sim.ci_half_width >= bound);

    const MonteCarloEstimate perfect = run_perfect_csi(cfg, trials, seed);
    CHECK(sim.mean_bits <= perfect.mean_bits + perfect.ci_half_width + sim.ci_half_width);
}

TEST_CASE("long pilots recover perfect-CSI capacity")
{
    SystemConfig cfg = defaults(64);
    cfg.tau = 1000000000;
    const MonteCarloEstimate imperfect = run_imperfect_csi(cfg, 2000, 8);
    const MonteCarloEstimate perfect = run_perfect_csi(cfg, 2000, 8);
    CHECK(std::abs(imperfect.mean_bits - perfect.mean_bits) < perfect.ci_half_width);
}

TEST_CASE("confidence interval shrinks as one over root trials")
{
    const SystemConfig cfg = defaults(16, 10.0, 3.3, 4);
    const MonteCarloEstimate small = run_perfect_csi(cfg, 1000, 10);
    const MonteCarloEstimate large = run_perfect_csi(cfg, 100000, 11);
    CHECK(small.ci_half_width / large.ci_half_width == doctest::Approx(10.0).epsilon(0.2));
}

TEST_CASE("discard policy")
{
    std::vector<double> means(1000, 2.0);
    means[10] = std::numeric_limits<double>::quiet_NaN();
    const MonteCarloEstimate ok = summarize(means);
    CHECK(ok.trials == 999);
    CHECK(ok.discarded == 1);
    CHECK(ok.mean_bits == 2.0);
    means[20] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(summarize(means), EvaluationError);
    CHECK_THROWS_AS(run_perfect_csi(defaults(32), 0, 1), ConfigError);
}

TEST_CASE("trial outcome bookkeeping")
{
    const SystemConfig cfg = defaults(32);
    const TrialOutcome t = run_trial(cfg, CsiMode::Imperfect, 9, 42);
    CHECK(t.seed_index == 42);
    CHECK(t.csi_mode == CsiMode::Imperfect);
    CHECK(t.per_user_bits.size() == 9);
    const TrialOutcome p = run_trial(cfg, CsiMode::Perfect, 9, 42);
    for (double b : p.per_user_bits)
        CHECK(b >= 0.0);
    const EvalResult r = run_perfect_csi(cfg, 100, 2).to_eval_result();
    CHECK(r.backend == Backend::MonteCarlo);
    CHECK(std::get<MonteCarloDetail>(r.detail).trials == 100);
}
