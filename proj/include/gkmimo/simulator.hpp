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

#pragma once

#include "gkmimo/bounds.hpp"
#include "gkmimo/channel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

// Monte Carlo link-level simulation of the zero-forcing uplink, with perfect CSI or
// with pilot-based MMSE channel estimates. Trial t of a run with seed s draws all of
// its randomness from RandomStream(s, t), so results do not depend on the number of
// worker threads or on scheduling.

namespace gkmimo
{
    enum class CsiMode
    {
        Perfect,
        Imperfect
    };

    const char *to_string(CsiMode mode);

    enum class Execution
    {
        Serial,   // reference loop
        Parallel  // OpenMP over trials
    };

    struct TrialOutcome
    {
        std::vector<double> per_user_bits;
        std::uint64_t seed_index = 0;
        CsiMode csi_mode = CsiMode::Perfect;
        bool discarded = false;
    };

    struct MonteCarloEstimate
    {
        double mean_bits = 0.0;
        double ci_half_width = 0.0; // 95% normal interval
        std::size_t trials = 0;     // trials kept
        std::size_t discarded = 0;

        EvalResult to_eval_result() const;
    };

    // Trials whose column-equilibrated Gram matrix has a larger condition number are discarded.
    inline constexpr double max_condition_number = 1e12;
    // A run fails when more than this fraction of trials is discarded.
    inline constexpr double max_discard_fraction = 1e-3;
    inline constexpr double ci_z = 1.959963984540054;

    // Post-ZF SNR p_u / [(G^H G)^-1]_kk for every user. Throws SingularChannelError.
    std::vector<double> zf_sinr(const Eigen::MatrixXcd &G, double p_u);

    // SINR at the output of the ZF filter built from G_hat while the signal passes through G:
    // p |a_k^H g_k|^2 / (p sum_{i != k} |a_k^H g_i|^2 + ||a_k||^2), A = G_hat (G_hat^H G_hat)^-1.
    std::vector<double> mismatched_zf_sinr(const Eigen::MatrixXcd &G, const Eigen::MatrixXcd &G_hat, double p_u);

    // G_hat = (G + W / sqrt(tau p_u)) D~, D~ = diag(tau p_u beta_i / (tau p_u beta_i + 1)), W ~ CN(0, 1).
    // The large-scale gains beta are taken from the realization.
    Eigen::MatrixXcd estimate_channel_mmse(const ChannelRealization &channel, const SystemConfig &config,
                                           RandomStream &rng);

    TrialOutcome run_trial(const SystemConfig &config, CsiMode mode, std::uint64_t seed, std::uint64_t trial_index);

    // Per-trial user-mean capacity, NaN for discarded trials.
    std::vector<double> trial_means(const SystemConfig &config, CsiMode mode, std::size_t trials,
                                    std::uint64_t seed, Execution execution = Execution::Parallel);

    // Ordered reduction of trial means. Throws EvaluationError when the discard
    // fraction exceeds max_discard_fraction or no trial survives.
    MonteCarloEstimate summarize(std::span<const double> means);

    MonteCarloEstimate run_monte_carlo(const SystemConfig &config, CsiMode mode, std::size_t trials,
                                       std::uint64_t seed, Execution execution = Execution::Parallel);

    MonteCarloEstimate run_perfect_csi(const SystemConfig &config, std::size_t trials, std::uint64_t seed,
                                       Execution execution = Execution::Parallel);

    MonteCarloEstimate run_imperfect_csi(const SystemConfig &config, std::size_t trials, std::uint64_t seed,
                                         Execution execution = Execution::Parallel);
}
