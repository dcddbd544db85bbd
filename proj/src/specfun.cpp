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

#include "gkmimo/specfun.hpp"
#include "gkmimo/error.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace gkmimo::specfun
{
    namespace
    {
        // B_2, B_4, ..., B_20
        constexpr std::array<double, 10> bernoulli_even = {
            1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
            -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};

        constexpr std::size_t zeta_terms = 48;

        // zeta(k) - 1 for k = 2 .. zeta_terms+1 by Euler-Maclaurin with cut N = 16.
        std::array<double, zeta_terms> make_zeta_minus_one()
        {
            std::array<double, zeta_terms> out{};
            constexpr double N = 16.0;
            for (std::size_t idx = 0; idx < zeta_terms; ++idx)
            {
                const double k = static_cast<double>(idx + 2);
                double tail = std::pow(N, 1.0 - k) / (k - 1.0) + 0.5 * std::pow(N, -k);
                double rising = k; // k (k+1) ... (k+2j-2)
                double factorial = 2.0;
                for (std::size_t j = 1; j <= bernoulli_even.size(); ++j)
                {
                    tail += bernoulli_even[j - 1] / factorial * rising * std::pow(N, -k - 2.0 * j + 1.0);
                    rising *= (k + 2.0 * j - 1.0) * (k + 2.0 * j);
                    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
                }
                double sum = tail;
                for (int n = static_cast<int>(N) - 1; n >= 2; --n)
                    sum += std::pow(static_cast<double>(n), -k);
                out[idx] = sum;
            }
            return out;
        }

        const std::array<double, zeta_terms> &zeta_minus_one()
        {
            static const auto table = make_zeta_minus_one();
            return table;
        }

        // ln Gamma(2 + e), |e| <= 0.5, from the Taylor series about 2.
        double log_gamma_near_two(double e)
        {
            constexpr double euler_gamma = std::numbers::egamma;
            const auto &zm1 = zeta_minus_one();
            double sum = 0.0;
            double power = e * e;
            double sign = 1.0;
            for (std::size_t idx = 0; idx < zeta_terms; ++idx)
            {
                const double k = static_cast<double>(idx + 2);
                const double term = sign * zm1[idx] * power / k;
                sum += term;
                if (std::abs(term) < 1e-18 * std::abs(sum))
                    break;
                power *= e;
                sign = -sign;
            }
            return (1.0 - euler_gamma) * e + sum;
        }

        double log_gamma_stirling(double x)
        {
            constexpr double half_log_two_pi = 0.91893853320467274178;
            const double inv = 1.0 / x;
            const double inv2 = inv * inv;
            double correction = 0.0;
            double power = inv;
            for (std::size_t k = 1; k <= 9; ++k)
            {
                const double kk = static_cast<double>(k);
                correction += bernoulli_even[k - 1] / (2.0 * kk * (2.0 * kk - 1.0)) * power;
                power *= inv2;
            }
            return (x - 0.5) * std::log(x) - x + half_log_two_pi + correction;
        }

        int sign_of(double x) { return x < 0.0 ? -1 : 1; }

        bool is_nonpositive_integer(double x)
        {
            return x <= 0.0 && std::floor(x) == x;
        }

        // Running sum of sign * exp(log_mag) terms stored as acc * exp(scale).
        class ScaledSum
        {
        public:
            void add(int sign, double log_mag)
            {
                if (empty_)
                {
                    acc_ = sign;
                    scale_ = log_mag;
                    empty_ = false;
                    return;
                }
                if (log_mag > scale_)
                {
                    acc_ = acc_ * std::exp(scale_ - log_mag) + sign;
                    scale_ = log_mag;
                }
                else
                {
                    acc_ += sign * std::exp(log_mag - scale_);
                }
            }

            double value() const { return empty_ ? 0.0 : acc_ * std::exp(scale_); }

            double log_abs() const
            {
                if (empty_ || acc_ == 0.0)
                    return -std::numeric_limits<double>::infinity();
                return std::log(std::abs(acc_)) + scale_;
            }

        private:
            double acc_ = 0.0;
            double scale_ = 0.0;
            bool empty_ = true;
        };

        // log|t_{i+1} / t_i| and its sign; terminates = true when an upper parameter hits zero.
        struct TermRatio
        {
            double log_mag = 0.0;
            int sign = 1;
            bool terminates = false;
        };

        TermRatio term_ratio(const PFqParams &p, std::size_t i, double log_abs_z, int sign_z)
        {
            TermRatio r;
            const double di = static_cast<double>(i);
            for (double a : p.upper)
            {
                const double f = a + di;
                if (f == 0.0)
                {
                    r.terminates = true;
                    return r;
                }
                r.log_mag += std::log(std::abs(f));
                r.sign *= sign_of(f);
            }
            for (double b : p.lower)
            {
                const double f = b + di;
                r.log_mag -= std::log(std::abs(f));
                r.sign *= sign_of(f);
            }
            r.log_mag += log_abs_z - std::log(di + 1.0);
            r.sign *= sign_z;
            return r;
        }

        SeriesResult classify(SeriesResult r, double threshold)
        {
            if (r.convergence != Convergence::Diverged && r.error_estimate > threshold * std::abs(r.value))
                r.convergence = Convergence::Diverged;
            return r;
        }
    }

    const char *to_string(Convergence c)
    {
        switch (c)
        {
        case Convergence::Convergent:
            return "convergent";
        case Convergence::AsymptoticTruncated:
            return "asymptotic";
        case Convergence::Diverged:
            return "diverged";
        }
        return "unknown";
    }

    double SeriesResult::relative_error() const
    {
        if (error_estimate == 0.0)
            return 0.0;
        if (value == 0.0)
            return std::numeric_limits<double>::infinity();
        return error_estimate / std::abs(value);
    }

    double log_gamma(double x)
    {
        if (!(x > 0.0))
            throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
        if (std::isinf(x))
            return x;

        if (x >= 10.0)
            return log_gamma_stirling(x);
        if (x > 2.5)
        {
            // Shift down into [1.5, 2.5]: Gamma(x) = (x-1)...(x-n) Gamma(x-n).
            double product = 1.0;
            double y = x;
            while (y > 2.5)
            {
                y -= 1.0;
                product *= y;
            }
            return log_gamma_near_two(y - 2.0) + std::log(product);
        }
        if (x >= 1.5)
            return log_gamma_near_two(x - 2.0);
        if (x >= 0.5)
            return log_gamma_near_two(x - 1.0) - std::log1p(x - 1.0);
        return log_gamma_near_two(x) - std::log(x * (x + 1.0));
    }

    double pochhammer(double a, unsigned i)
    {
        double product = 1.0;
        for (unsigned j = 0; j < i; ++j)
            product *= a + static_cast<double>(j);
        return product;
    }

    SeriesResult pfq_series(const PFqParams &params, std::size_t max_terms, double divergence_threshold)
    {
        const std::size_t p = params.upper.size();
        const std::size_t q = params.lower.size();
        if (p > max_pfq_order || q > max_pfq_order)
            throw DomainError("pfq_series: at most 8 upper and 8 lower parameters are supported");
        if (max_terms < 2)
            throw DomainError("pfq_series: max_terms must be at least 2");
        for (double b : params.lower)
            if (is_nonpositive_integer(b))
                throw DomainError("pfq_series: lower parameter " + std::to_string(b) + " is a pole");

        const double z = params.argument;
        if (z == 0.0)
            return {1.0, 1, Convergence::Convergent, 0.0};

        // A nonpositive-integer upper parameter makes the series a polynomial: sum it whole.
        std::optional<std::size_t> degree;
        for (double a : params.upper)
            if (is_nonpositive_integer(a))
                degree = std::min(degree.value_or(SIZE_MAX), static_cast<std::size_t>(-a));
        if (degree && *degree < max_terms)
        {
            const double log_abs_z0 = std::log(std::abs(z));
            ScaledSum poly;
            double log_t = 0.0;
            int sign_t = 1;
            for (std::size_t i = 0; i <= *degree; ++i)
            {
                poly.add(sign_t, log_t);
                const TermRatio r = term_ratio(params, i, log_abs_z0, sign_of(z));
                if (r.terminates)
                    break;
                log_t += r.log_mag;
                sign_t *= r.sign;
            }
            return {poly.value(), *degree + 1, Convergence::Convergent, 0.0};
        }

        const bool asymptotic = p >= q + 2;
        if (p == q + 1 && std::abs(z) >= 1.0)
            return {std::numeric_limits<double>::quiet_NaN(), 0, Convergence::Diverged,
                    std::numeric_limits<double>::infinity()};

        const double log_abs_z = std::log(std::abs(z));
        const int sign_z = sign_of(z);
        constexpr double log_eps = -39.14394658089878; // ln(1e-17)

        ScaledSum sum;
        double log_t = 0.0; // t_0 = 1
        int sign_t = 1;

        if (asymptotic)
        {
            for (std::size_t i = 0;; ++i)
            {
                if (i + 1 >= max_terms)
                {
                    sum.add(sign_t, log_t);
                    const TermRatio r = term_ratio(params, i, log_abs_z, sign_z);
                    const double err = r.terminates ? 0.0 : std::exp(log_t + r.log_mag);
                    return classify({sum.value(), i + 1, Convergence::AsymptoticTruncated, err}, divergence_threshold);
                }
                const TermRatio r = term_ratio(params, i, log_abs_z, sign_z);
                if (r.terminates)
                {
                    sum.add(sign_t, log_t);
                    return {sum.value(), i + 1, Convergence::Convergent, 0.0};
                }
                if (r.log_mag >= 0.0)
                {
                    // t_i is the smallest term: truncate before it.
                    if (i == 0)
                        return {1.0, 0, Convergence::Diverged, 1.0};
                    const double err = std::exp(log_t);
                    return classify({sum.value(), i, Convergence::AsymptoticTruncated, err}, divergence_threshold);
                }
                sum.add(sign_t, log_t);
                log_t += r.log_mag;
                sign_t *= r.sign;
            }
        }

        const double limiting_ratio = (p == q + 1) ? std::abs(z) : 0.0;
        for (std::size_t i = 0;; ++i)
        {
            sum.add(sign_t, log_t);
            const TermRatio r = term_ratio(params, i, log_abs_z, sign_z);
            if (r.terminates)
                return {sum.value(), i + 1, Convergence::Convergent, 0.0};

            const double log_next = log_t + r.log_mag;
            const double rho = std::max(std::exp(r.log_mag), limiting_ratio);
            const double log_tail = rho < 1.0 ? log_next - std::log1p(-rho)
                                              : std::numeric_limits<double>::infinity();
            const bool done = rho < 1.0 && log_tail <= log_eps + sum.log_abs();
            if (done || i + 1 >= max_terms)
            {
                const double err = rho < 1.0 ? std::exp(log_tail) : std::exp(log_next);
                return classify({sum.value(), i + 1, Convergence::Convergent, err}, divergence_threshold);
            }
            log_t = log_next;
            sign_t *= r.sign;
        }
    }

    std::pair<double, double> duplication_check(double x)
    {
        if (!(x > 0.0))
            throw DomainError("duplication_check: argument must be positive");
        const double lhs = log_gamma(2.0 * x);
        const double rhs = (2.0 * x - 1.0) * std::numbers::ln2 - 0.5 * std::log(std::numbers::pi) +
                           log_gamma(x) + log_gamma(x + 0.5);
        return {std::exp(lhs), std::exp(rhs)};
    }
}
