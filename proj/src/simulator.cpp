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

#include "gkmimo/simulator.hpp"
#include "gkmimo/error.hpp"


#include <cmath>
#include <limits>
#include <string>

namespace gkmimo
{
    const char *to_string(CsiMode mode)
    {
        return mode == CsiMode::Perfect ? "perfect" : "imperfect";
    }

    EvalResult MonteCarloEstimate::to_eval_result() const
    {
        EvalResult r;
        r.value = mean_bits;
        r.backend = Backend::MonteCarlo;
        r.error_estimate = ci_half_width;
        r.detail = MonteCarloDetail{trials, discarded, ci_half_width};
        return r;
    }

    namespace
    {
        // Column-equilibrated Gram matrix of A: Q^H Q with Q = A diag(1/||a_k||).
        struct EquilibratedGram
        {
            Eigen::MatrixXcd gram;
            Eigen::VectorXd norms;
        };

        EquilibratedGram equilibrated_gram(const Eigen::MatrixXcd &A)
        {
            EquilibratedGram out;
            out.gram = A.adjoint() * A;
            const Eigen::Index K = A.cols();
            out.norms.resize(K);
            for (Eigen::Index k = 0; k < K; ++k)
            {
                const double d = out.gram(k, k).real();
                if (!(d > 0.0) || !std::isfinite(d))
                    throw SingularChannelError("channel column " + std::to_string(k) + " is zero",
                                               std::numeric_limits<double>::infinity());
                out.norms(k) = std::sqrt(d);
            }
            for (Eigen::Index j = 0; j < K; ++j)
                for (Eigen::Index i = 0; i < K; ++i)
                    out.gram(i, j) /= out.norms(i) * out.norms(j);
            return out;
        }

        Eigen::MatrixXcd checked_inverse(const Eigen::MatrixXcd &gram)
        {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
            const double lo = eig.eigenvalues().minCoeff();
            const double hi = eig.eigenvalues().maxCoeff();
            const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
            if (!(cond <= max_condition_number))
                throw SingularChannelError("Gram matrix condition number " + std::to_string(cond) + " exceeds limit",
                                           cond);
            Eigen::LLT<Eigen::MatrixXcd> llt(gram);
            return llt.solve(Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()));
        }

        double trial_mean_or_nan(const SystemConfig &config, CsiMode mode, std::uint64_t seed, std::uint64_t t)
        {
            const TrialOutcome outcome = run_trial(config, mode, seed, t);
            if (outcome.discarded)
                return std::numeric_limits<double>::quiet_NaN();
            double sum = 0.0;
            for (double b : outcome.per_user_bits)
                sum += b;
            return sum / static_cast<double>(outcome.per_user_bits.size());
        }
    }

    std::vector<double> zf_sinr(const Eigen::MatrixXcd &G, double p_u)
    {
        const EquilibratedGram eg = equilibrated_gram(G);
        const Eigen::MatrixXcd inv = checked_inverse(eg.gram);
        std::vector<double> out(static_cast<std::size_t>(G.cols()));
        for (Eigen::Index k = 0; k < G.cols(); ++k)
            out[k] = p_u * eg.norms(k) * eg.norms(k) / inv(k, k).real();
        return out;
    }

    std::vector<double> mismatched_zf_sinr(const Eigen::MatrixXcd &G, const Eigen::MatrixXcd &G_hat, double p_u)
    {
        const EquilibratedGram eg = equilibrated_gram(G_hat);
        const Eigen::MatrixXcd inv = checked_inverse(eg.gram);
        // Q^H G with Q the equilibrated estimate; U = (Q^H Q)^-1 Q^H G.
        Eigen::MatrixXcd QhG = G_hat.adjoint() * G;
        for (Eigen::Index i = 0; i < QhG.rows(); ++i)
            QhG.row(i) /= eg.norms(i);
        const Eigen::MatrixXcd U = inv * QhG;

        const Eigen::Index K = G.cols();
        std::vector<double> out(static_cast<std::size_t>(K));
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double signal = p_u * std::norm(U(k, k));
            double leak = 0.0;
            for (Eigen::Index i = 0; i < K; ++i)
                if (i != k)
                    leak += std::norm(U(k, i));
            out[k] = signal / (p_u * leak + inv(k, k).real());
        }
        return out;
    }

    Eigen::MatrixXcd estimate_channel_mmse(const ChannelRealization &channel, const SystemConfig &config,
                                           RandomStream &rng)
    {
        const Eigen::Index M = channel.G.rows();
        const Eigen::Index K = channel.G.cols();
        const double pilot_snr = config.tau * config.p_u;
        Eigen::MatrixXcd G_hat(M, K);
        if (!(pilot_snr > 0.0))
        {
            G_hat.setZero();
            return G_hat;
        }
        const double noise_scale = 1.0 / std::sqrt(pilot_snr);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double b = channel.beta[k];
            const double shrink = pilot_snr * b / (pilot_snr * b + 1.0);
            for (Eigen::Index n = 0; n < M; ++n)
                G_hat(n, k) = (channel.G(n, k) + noise_scale * rng.complex_normal()) * shrink;
        }
        return G_hat;
    }

    TrialOutcome run_trial(const SystemConfig &config, CsiMode mode, std::uint64_t seed, std::uint64_t trial_index)
    {
        RandomStream rng(seed, trial_index);
        const int K = config.K;
        std::vector<double> distances(K);
        for (int k = 0; k < K; ++k)
            distances[k] = sample_user_distance(config.geometry, rng);
        const ChannelRealization channel = realize_channel(config, distances, rng);

        TrialOutcome outcome;
        outcome.seed_index = trial_index;
        outcome.csi_mode = mode;
        if (config.p_u == 0.0)
        {
            outcome.per_user_bits.assign(K, 0.0);
            return outcome;
        }
        try
        {
            std::vector<double> sinr;
            if (mode == CsiMode::Perfect)
            {
                sinr = zf_sinr(channel.G, config.p_u);
            }
            else
            {
                const Eigen::MatrixXcd G_hat = estimate_channel_mmse(channel, config, rng);
                sinr = mismatched_zf_sinr(channel.G, G_hat, config.p_u);
            }
            outcome.per_user_bits.resize(K);
            for (int k = 0; k < K; ++k)
                outcome.per_user_bits[k] = std::log2(1.0 + sinr[k]);
        }
        catch (const SingularChannelError &)
        {
            outcome.discarded = true;
            outcome.per_user_bits.clear();
        }
        return outcome;
    }

    std::vector<double> trial_means(const SystemConfig &config, CsiMode mode, std::size_t trials,
                                    std::uint64_t seed, Execution execution)
    {
        config.validate();
        std::vector<double> means(trials);
        if (execution == Execution::Serial)
        {
            for (std::size_t t = 0; t < trials; ++t)
                means[t] = trial_mean_or_nan(config, mode, seed, t);
            return means;
        }

        const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t t = 0; t < n; ++t)
            means[static_cast<std::size_t>(t)] = trial_mean_or_nan(config, mode, seed, static_cast<std::uint64_t>(t));
        return means;
    }

    MonteCarloEstimate summarize(std::span<const double> means)
    {
        MonteCarloEstimate est;
        double sum = 0.0;
        for (double x : means)
        {
            if (std::isnan(x))
            {
                ++est.discarded;
                continue;
            }
            sum += x;
            ++est.trials;
        }
        if (est.trials == 0)
            throw EvaluationError("Monte Carlo run kept no trials", std::numeric_limits<double>::quiet_NaN());
        est.mean_bits = sum / static_cast<double>(est.trials);

        double sq = 0.0;
        for (double x : means)
            if (!std::isnan(x))
                sq += (x - est.mean_bits) * (x - est.mean_bits);
        const double n = static_cast<double>(est.trials);
        const double variance = est.trials > 1 ? sq / (n - 1.0) : 0.0;
        est.ci_half_width = ci_z * std::sqrt(variance / n);

        if (static_cast<double>(est.discarded) > max_discard_fraction * static_cast<double>(means.size()))
            throw EvaluationError("Monte Carlo run discarded " + std::to_string(est.discarded) + " of " +
                                      std::to_string(means.size()) + " trials (ill-conditioned channels)",
                                  est.mean_bits);
        return est;
    }

    MonteCarloEstimate run_monte_carlo(const SystemConfig &config, CsiMode mode, std::size_t trials,
                                       std::uint64_t seed, Execution execution)
    {
        if (trials == 0)
            throw ConfigError("Monte Carlo run needs at least one trial");
        const std::vector<double> means = trial_means(config, mode, trials, seed, execution);
        return summarize(means);
    }

    MonteCarloEstimate run_perfect_csi(const SystemConfig &config, std::size_t trials, std::uint64_t seed,
                                       Execution execution)
    {
        return run_monte_carlo(config, CsiMode::Perfect, trials, seed, execution);
    }

    MonteCarloEstimate run_imperfect_csi(const SystemConfig &config, std::size_t trials, std::uint64_t seed,
                                         Execution execution)
    {
        return run_monte_carlo(config, CsiMode::Imperfect, trials, seed, execution);
    }
}
