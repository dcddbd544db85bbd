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

#include <cstddef>
#include <utility>
#include <vector>

// Special-function kernels: log-gamma, Pochhammer symbol and generalized
// hypergeometric series pFq with convergence classification.
//
// All functions are pure and reentrant.

namespace gkmimo::specfun
{
    // ln Gamma(x) for x > 0. Throws DomainError otherwise.
    double log_gamma(double x);

    // Rising factorial (a)_i = a (a+1) ... (a+i-1); 1 for i = 0.
    double pochhammer(double a, unsigned i);

    struct PFqParams
    {
        std::vector<double> upper; // a_1 ... a_p
        std::vector<double> lower; // b_1 ... b_q
        double argument = 0.0;     // z
    };

    enum class Convergence
    {
        Convergent,
        AsymptoticTruncated,
        Diverged
    };

    const char *to_string(Convergence c);

    struct SeriesResult
    {
        double value = 0.0;
        std::size_t terms_used = 0;
        Convergence convergence = Convergence::Diverged;
        double error_estimate = 0.0;

        bool usable() const { return convergence != Convergence::Diverged; }

        // error_estimate / |value|; infinity for a zero value with nonzero error.
        double relative_error() const;
    };

    inline constexpr std::size_t max_pfq_order = 8;
    inline constexpr double default_divergence_threshold = 1e-3;

    // Sums sum_i [prod (a_j)_i / prod (b_j)_i] z^i / i! in log-magnitude + sign form.
    //
    //  * p <= q, or p = q+1 with |z| < 1: convergent; stops once the tail bound drops
    //    below double precision of the partial sum. error_estimate bounds the tail
    //    |t_n| / (1 - rho), rho the limiting term ratio.
    //  * p = q+1 with |z| >= 1: Diverged (no analytic continuation).
    //  * p >= q+2: asymptotic; optimal truncation before the smallest-magnitude term,
    //    whose magnitude is reported as error_estimate.
    //
    // Any result whose error_estimate / |value| exceeds divergence_threshold, or an
    // asymptotic series whose terms grow from the start, is classified Diverged.
    // Throws DomainError for a nonpositive-integer lower parameter, for p or q > 8,
    // or for max_terms < 2.
    SeriesResult pfq_series(const PFqParams &params, std::size_t max_terms,
                            double divergence_threshold = default_divergence_threshold);

    // Both sides of Gamma(2x) = 2^(2x-1) / sqrt(pi) * Gamma(x) Gamma(x + 1/2), evaluated via log_gamma.
    std::pair<double, double> duplication_check(double x);
}
