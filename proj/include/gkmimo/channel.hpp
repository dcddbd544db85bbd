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

#include "gkmimo/random.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <vector>

// Generalized-K channel model: Nakagami-m fast fading on every antenna/user pair,
// gamma shadowing and distance path loss per user, users placed uniformly on an
// annulus R0 < D < R around the base station.

namespace gkmimo
{
    // Gamma shadowing mu ~ Gamma(m_shadow, omega), Nakagami-m_fast fast fading, path loss D^-v.
    struct FadingParams
    {
        double m_shadow = 3.3;
        double omega = 1.0 / 3.3;
        double m_fast = 1.0;
        double v = 3.6;

        // omega = 1/m so that E[mu] = 1.
        static FadingParams mean_normalized(double m_shadow, double v = 3.6, double m_fast = 1.0);

        void validate() const;
    };

    struct CellGeometry
    {
        double R = 1000.0;
        double R0 = 100.0;
        int users = 9;

        void validate() const;
    };

    // y = sqrt(p_u) G x + w, with M receive antennas and K single-antenna users.
    struct SystemConfig
    {
        int M = 128;
        int K = 9;
        double p_u = 0.0; // linear transmit SNR after reference-distance normalization
        int tau = 9;      // pilot length
        CellGeometry geometry;
        FadingParams fading;

        // Throws ConfigError unless M > K >= 1, tau >= K, p_u >= 0 and the
        // geometry/fading blocks are valid. geometry.users must equal K.
        void validate() const;
    };

    inline constexpr double default_reference_distance = 500.0;

    // p_u = 10^(P_dB/10) * d_ref^v: mean received SNR at d_ref equals P when E[mu] = 1.
    double transmit_snr_from_db(double power_db, double v, double reference_distance = default_reference_distance);

    // Gamma(shape, scale) variate (Marsaglia-Tsang; shape < 1 via the u^(1/shape) boost).
    double sample_gamma(double shape, double scale, RandomStream &rng);

    double sample_shadowing(const FadingParams &params, RandomStream &rng);

    // Nakagami-m_fast envelope with unit spread, uniform phase. m_fast = 1 gives CN(0, 1).
    std::complex<double> sample_fast_fading(double m_fast, RandomStream &rng);

    // Inverse CDF of the radial pdf 2x / (R^2 - R0^2) on [R0, R].
    double user_distance_from_uniform(const CellGeometry &geom, double u);
    double sample_user_distance(const CellGeometry &geom, RandomStream &rng);

    struct ChannelRealization
    {
        Eigen::MatrixXcd G; // M x K, G(n,k) = H(n,k) sqrt(beta[k])
        Eigen::MatrixXcd H; // M x K fast fading
        std::vector<double> beta;
        std::vector<double> distances;
        std::vector<double> mu;
    };

    // Test hooks: pin the shadowing variates or the fast-fading matrix.
    struct ChannelOverrides
    {
        std::optional<std::vector<double>> mu;
        std::optional<Eigen::MatrixXcd> fast_fading;
    };

    // Draws fresh shadowing per user (unless overridden), then i.i.d. fast fading
    // column by column. Throws ConfigError when M <= K or distances.size() != K.
    ChannelRealization realize_channel(const SystemConfig &config, std::span<const double> distances,
                                       RandomStream &rng, const ChannelOverrides &overrides = {});
}
