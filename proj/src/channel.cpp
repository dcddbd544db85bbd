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

#include "gkmimo/channel.hpp"
#include "gkmimo/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gkmimo
{
    FadingParams FadingParams::mean_normalized(double m_shadow, double v, double m_fast)
    {
        FadingParams p;
        p.m_shadow = m_shadow;
        p.omega = 1.0 / m_shadow;
        p.m_fast = m_fast;
        p.v = v;
        return p;
    }

    void FadingParams::validate() const
    {
        if (!(m_shadow > 0.0))
            throw ConfigError("shadowing shape m must be positive");
        if (!(omega > 0.0))
            throw ConfigError("shadowing scale omega must be positive");
        if (!(m_fast >= 0.5))
            throw ConfigError("Nakagami fast-fading shape must be at least 0.5");
        if (!(v >= 2.0 && v <= 6.0))
            throw ConfigError("path-loss exponent must lie in [2, 6]");
    }

    void CellGeometry::validate() const
    {
        if (!(R0 > 0.0 && R0 < R))
            throw ConfigError("cell geometry needs 0 < R0 < R (R0=" + std::to_string(R0) +
                              ", R=" + std::to_string(R) + ")");
        if (users < 1)
            throw ConfigError("at least one user is required");
    }

    void SystemConfig::validate() const
    {
        if (K < 1)
            throw ConfigError("K must be at least 1");
        if (M <= K)
            throw ConfigError("zero-forcing needs M > K (M=" + std::to_string(M) + ", K=" + std::to_string(K) + ")");
        if (tau < K)
            throw ConfigError("pilot length tau must be at least K (tau=" + std::to_string(tau) +
                              ", K=" + std::to_string(K) + ")");
        if (!(p_u >= 0.0) || std::isinf(p_u))
            throw ConfigError("transmit SNR must be finite and nonnegative");
        if (geometry.users != K)
            throw ConfigError("geometry.users must equal K");
        geometry.validate();
        fading.validate();
    }

    double transmit_snr_from_db(double power_db, double v, double reference_distance)
    {
        return std::pow(10.0, power_db / 10.0) * std::pow(reference_distance, v);
    }

    double sample_gamma(double shape, double scale, RandomStream &rng)
    {
        if (shape < 1.0)
        {
            // X = Y U^(1/a) with Y ~ Gamma(a+1).
            const double y = sample_gamma(shape + 1.0, 1.0, rng);
            return scale * y * std::exp(std::log(rng.uniform()) / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;)
        {
            double x, v;
            do
            {
                x = rng.normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = rng.uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2)
                return scale * d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
                return scale * d * v;
        }
    }

    double sample_shadowing(const FadingParams &params, RandomStream &rng)
    {
        return sample_gamma(params.m_shadow, params.omega, rng);
    }

    std::complex<double> sample_fast_fading(double m_fast, RandomStream &rng)
    {
        if (m_fast == 1.0)
            return rng.complex_normal();
        // Nakagami power |h|^2 ~ Gamma(m, 1/m).
        const double power = sample_gamma(m_fast, 1.0 / m_fast, rng);
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        return std::polar(std::sqrt(power), phase);
    }

    double user_distance_from_uniform(const CellGeometry &geom, double u)
    {
        const double r02 = geom.R0 * geom.R0;
        return std::sqrt(r02 + u * (geom.R * geom.R - r02));
    }

    double sample_user_distance(const CellGeometry &geom, RandomStream &rng)
    {
        return user_distance_from_uniform(geom, rng.uniform());
    }

    ChannelRealization realize_channel(const SystemConfig &config, std::span<const double> distances,
                                       RandomStream &rng, const ChannelOverrides &overrides)
    {
        const int M = config.M;
        const int K = config.K;
        if (M <= K)
            throw ConfigError("zero-forcing needs M > K");
        if (distances.size() != static_cast<std::size_t>(K))
            throw ConfigError("realize_channel: expected one distance per user");
        if (overrides.mu && overrides.mu->size() != static_cast<std::size_t>(K))
            throw ConfigError("realize_channel: mu override must have K entries");
        if (overrides.fast_fading && (overrides.fast_fading->rows() != M || overrides.fast_fading->cols() != K))
            throw ConfigError("realize_channel: fast-fading override must be M x K");

        ChannelRealization out;
        out.distances.assign(distances.begin(), distances.end());
        out.mu.resize(K);
        out.beta.resize(K);
        for (int k = 0; k < K; ++k)
        {
            out.mu[k] = overrides.mu ? (*overrides.mu)[k] : sample_shadowing(config.fading, rng);
            out.beta[k] = out.mu[k] / std::pow(out.distances[k], config.fading.v);
        }

        if (overrides.fast_fading)
        {
            out.H = *overrides.fast_fading;
        }
        else
        {
            out.H.resize(M, K);
            for (int k = 0; k < K; ++k)
                for (int n = 0; n < M; ++n)
                    out.H(n, k) = sample_fast_fading(config.fading.m_fast, rng);
        }

        out.G.resize(M, K);
        for (int k = 0; k < K; ++k)
            out.G.col(k) = out.H.col(k) * std::sqrt(out.beta[k]);
        return out;
    }
}
