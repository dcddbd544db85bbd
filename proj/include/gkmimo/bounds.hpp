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

#include "gkmimo/channel.hpp"
#include "gkmimo/quadrature.hpp"
#include "gkmimo/specfun.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <variant>

namespace gkmimo
{
    enum class Backend
    {
        Quadrature,
        Series,
        MonteCarlo
    };

    const char *to_string(Backend b);

    struct QuadratureDetail
    {
        std::size_t evaluations = 0;
        std::size_t intervals = 0;
    };

    struct SeriesDetail
    {
        std::size_t terms = 0;                    // summed over every pFq evaluated
        specfun::Convergence convergence{};       // worst class seen
        double relative_error = 0.0;
    };

    struct MonteCarloDetail
    {
        std::size_t trials = 0;
        std::size_t discarded = 0;
        double ci_half_width = 0.0;
    };

    // value is in bits/s/Hz for every capacity evaluation. The imperfect-CSI bound may be
    // negative at low SNR; achievable() clamps at zero for reporting.
    struct EvalResult
    {
        double value = 0.0;
        Backend backend = Backend::Quadrature;
        double error_estimate = 0.0;
        std::variant<QuadratureDetail, SeriesDetail, MonteCarloDetail> detail;

        double achievable() const { return value > 0.0 ? value : 0.0; }
    };
}

namespace gkmimo::bounds
{
    // Relative targets of the inner (shadowing) and outer (radial) quadratures.
    inline constexpr double inner_rel_tol = 1e-10;
    inline constexpr double outer_rel_tol = 1e-8;
    inline constexpr std::size_t series_max_terms = 4000;

    // log2(1 + beta p_u (M - K))
    double pointwise_bound_perfect(double beta, const SystemConfig &config);

    // log2(1 + tau p_u^2 (M-K) beta^2) - log2(1 + tau p_u beta) - log2(1 + K/tau); may be negative.
    double pointwise_bound_imperfect(double beta, const SystemConfig &config);

    // The tighter imperfect-CSI bound with the inter-user sum kept:
    // log2(1 + tau p^2 (M-K) b_k^2 / ((tau p b_k + 1) sum_i p b_i/(tau p b_i + 1) + tau p b_k + 1))
    double reference_bound_imperfect(std::span<const double> beta_all, std::size_t k, const SystemConfig &config);

    // log2(1 + K/tau)
    double pilot_penalty(const SystemConfig &config);

    // E[f(mu)] for mu ~ Gamma(m, omega), integrated in u = ln(mu/omega), which removes the
    // mu^(m-1) endpoint singularity for m < 1. Throws EvaluationError when the node cap is hit.
    EvalResult gamma_expectation(const std::function<double(double)> &f, double m, double omega,
                                 double rel_tol = inner_rel_tol);

    // Average of f(D) under the radial user density 2x / (R^2 - R0^2) on [R0, R].
    EvalResult radial_average(const std::function<double(double)> &f, const CellGeometry &geometry,
                              double rel_tol = outer_rel_tol);

    // E_mu[log2(1 + mu D^-v p_u (M - K))] at user distance D.
    // Backend::Series evaluates the 3F1 closed form and throws EvaluationError unless the
    // optimally truncated series is usable.
    EvalResult ergodic_capacity_perfect(double D, const SystemConfig &config, Backend backend = Backend::Quadrature);

    struct ImperfectTerms
    {
        EvalResult xi1;  // E[log2(1 + tau p_u^2 (M-K) beta^2)]
        EvalResult xi2;  // E[log2(1 + tau p_u beta)]
        double penalty;  // log2(1 + K/tau)
    };

    ImperfectTerms imperfect_terms(double D, const SystemConfig &config, Backend backend = Backend::Quadrature);

    // xi1 - xi2 - penalty at distance D.
    EvalResult ergodic_capacity_imperfect(double D, const SystemConfig &config, Backend backend = Backend::Quadrature);

    // Cell averages over the user radius (series backend: 4F2 / 5F2 difference forms).
    EvalResult cell_average_perfect(const SystemConfig &config, Backend backend = Backend::Quadrature);
    EvalResult cell_average_imperfect(const SystemConfig &config, Backend backend = Backend::Quadrature);
}
