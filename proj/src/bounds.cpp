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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gkmimo
{
    const char *to_string(Backend b)
    {
        switch (b)
        {
        case Backend::Quadrature:
            return "quadrature";
        case Backend::Series:
            return "series";
        case Backend::MonteCarlo:
            return "monte-carlo";
        }
        return "unknown";
    }
}

namespace gkmimo::bounds
{
    namespace
    {
        constexpr double ln2 = std::numbers::ln2;

        double log2_1p(double x) { return std::log1p(x) / ln2; }

        double path_gain(double D, double v) { return std::pow(D, -v); }

        void require_bound_backend(Backend backend)
        {
            if (backend == Backend::MonteCarlo)
                throw ConfigError("analytic bounds support the quadrature and series backends only");
        }

        EvalResult from_quadrature(const QuadratureResult &q)
        {
            EvalResult r;
            r.value = q.value;
            r.backend = Backend::Quadrature;
            r.error_estimate = q.error_estimate;
            r.detail = QuadratureDetail{q.evaluations, q.intervals};
            return r;
        }

        int severity(specfun::Convergence c)
        {
            switch (c)
            {
            case specfun::Convergence::Convergent:
                return 0;
            case specfun::Convergence::AsymptoticTruncated:
                return 1;
            case specfun::Convergence::Diverged:
                return 2;
            }
            return 2;
        }

        // Linear combination sum_j coeff_j * pFq_j of series, each required usable.
        class SeriesCombination
        {
        public:
            explicit SeriesCombination(const char *what) : what_(what) {}

            void add(double coeff, const specfun::PFqParams &params)
            {
                const specfun::SeriesResult s = specfun::pfq_series(params, series_max_terms);
                terms_ += s.terms_used;
                if (severity(s.convergence) > severity(worst_))
                    worst_ = s.convergence;
                if (!s.usable())
                {
                    diverged_ = true;
                    return;
                }
                value_ += coeff * s.value;
                error_ += std::abs(coeff) * s.error_estimate;
            }

            void add_constant(double c) { value_ += c; }

            EvalResult finish() const
            {
                if (diverged_)
                    throw EvaluationError(std::string(what_) + ": hypergeometric series diverged; use the quadrature backend",
                                          value_);
                EvalResult r;
                r.value = value_;
                r.backend = Backend::Series;
                r.error_estimate = error_;
                const double rel = value_ == 0.0 ? (error_ == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                                 : error_ / std::abs(value_);
                r.detail = SeriesDetail{terms_, worst_, rel};
                return r;
            }

        private:
            const char *what_;
            double value_ = 0.0;
            double error_ = 0.0;
            std::size_t terms_ = 0;
            specfun::Convergence worst_ = specfun::Convergence::Convergent;
            bool diverged_ = false;
        };

        // E[log2(1 + c mu)] = c omega m / ln2 * 3F1(m+1, 1, 1; 2; -c omega)
        void add_log_mean_series(SeriesCombination &acc, double weight, double c, const FadingParams &f)
        {
            const double m = f.m_shadow;
            const double z = c * f.omega;
            acc.add(weight * z * m / ln2, {{m + 1.0, 1.0, 1.0}, {2.0}, -z});
        }

        EvalResult capacity_from_terms(const ImperfectTerms &t)
        {
            EvalResult r = t.xi1;
            r.value = t.xi1.value - t.xi2.value - t.penalty;
            r.error_estimate = t.xi1.error_estimate + t.xi2.error_estimate;
            if (auto *q1 = std::get_if<QuadratureDetail>(&t.xi1.detail))
            {
                const auto &q2 = std::get<QuadratureDetail>(t.xi2.detail);
                r.detail = QuadratureDetail{q1->evaluations + q2.evaluations, q1->intervals + q2.intervals};
            }
            else
            {
                const auto &s1 = std::get<SeriesDetail>(t.xi1.detail);
                const auto &s2 = std::get<SeriesDetail>(t.xi2.detail);
                const double rel = r.value == 0.0 ? 0.0 : r.error_estimate / std::abs(r.value);
                r.detail = SeriesDetail{s1.terms + s2.terms,
                                        severity(s1.convergence) >= severity(s2.convergence) ? s1.convergence : s2.convergence,
                                        rel};
            }
            return r;
        }
    }

    double pointwise_bound_perfect(double beta, const SystemConfig &config)
    {
        return log2_1p(beta * config.p_u * (config.M - config.K));
    }

    double pilot_penalty(const SystemConfig &config)
    {
        return log2_1p(static_cast<double>(config.K) / config.tau);
    }

    double pointwise_bound_imperfect(double beta, const SystemConfig &config)
    {
        const double tau = config.tau;
        const double snr = config.p_u * beta;
        return log2_1p(tau * (config.M - config.K) * snr * snr) - log2_1p(tau * snr) - pilot_penalty(config);
    }

    double reference_bound_imperfect(std::span<const double> beta_all, std::size_t k, const SystemConfig &config)
    {
        if (k >= beta_all.size())
            throw ConfigError("reference_bound_imperfect: user index out of range");
        const double tau = config.tau;
        const double p = config.p_u;
        double interference = 0.0;
        for (double b : beta_all)
            interference += p * b / (tau * p * b + 1.0);
        const double bk = beta_all[k];
        const double numerator = tau * p * p * (config.M - config.K) * bk * bk;
        const double denominator = (tau * p * bk + 1.0) * interference + tau * p * bk + 1.0;
        return log2_1p(numerator / denominator);
    }

    EvalResult gamma_expectation(const std::function<double(double)> &f, double m, double omega, double rel_tol)
    {
        if (!(m > 0.0) || !(omega > 0.0))
            throw DomainError("gamma_expectation: shape and scale must be positive");

        const double log_norm = specfun::log_gamma(m);
        // Below u_lo the neglected mass e^{m u}/Gamma(m+1) is under 1e-17.
        const double u_lo = (std::log(1e-17) + specfun::log_gamma(m + 1.0)) / m;
        // Above t_hi the integrand, allowing |f| up to t^2, is under 1e-20.
        double t_hi = m + 2.0;
        while ((m + 2.0) * std::log(t_hi) - t_hi - log_norm > std::log(1e-20))
            t_hi *= 1.25;
        const double u_hi = std::log(t_hi);

        auto integrand = [&](double u) {
            const double t = std::exp(u);
            const double weight = std::exp(m * u - t - log_norm);
            return weight == 0.0 ? 0.0 : weight * f(omega * t);
        };

        QuadratureOptions opts;
        opts.rel_tol = rel_tol;
        opts.abs_tol = 1e-300;
        opts.initial_panels = 24;
        const QuadratureResult q = integrate_adaptive(integrand, std::min(u_lo, u_hi - 1.0), u_hi, opts);
        if (!q.converged)
            throw EvaluationError("gamma_expectation: quadrature did not reach the relative target " +
                                      std::to_string(rel_tol),
                                  q.value);
        return from_quadrature(q);
    }

    EvalResult radial_average(const std::function<double(double)> &f, const CellGeometry &geometry, double rel_tol)
    {
        geometry.validate();
        const double norm = 2.0 / (geometry.R * geometry.R - geometry.R0 * geometry.R0);
        QuadratureOptions opts;
        opts.rel_tol = rel_tol;
        opts.abs_tol = 1e-300;
        opts.initial_panels = 8;
        const QuadratureResult q = integrate_adaptive([&](double x) { return norm * x * f(x); },
                                                      geometry.R0, geometry.R, opts);
        if (!q.converged)
            throw EvaluationError("radial_average: quadrature did not reach the relative target", q.value);
        return from_quadrature(q);
    }

    EvalResult ergodic_capacity_perfect(double D, const SystemConfig &config, Backend backend)
    {
        require_bound_backend(backend);
        if (!(D > 0.0))
            throw DomainError("ergodic_capacity_perfect: distance must be positive");
        const FadingParams &fad = config.fading;
        const double c = config.p_u * (config.M - config.K) * path_gain(D, fad.v);

        if (backend == Backend::Series)
        {
            SeriesCombination acc("ergodic_capacity_perfect");
            add_log_mean_series(acc, 1.0, c, fad);
            return acc.finish();
        }
        return gamma_expectation([c](double mu) { return log2_1p(c * mu); }, fad.m_shadow, fad.omega);
    }

    ImperfectTerms imperfect_terms(double D, const SystemConfig &config, Backend backend)
    {
        require_bound_backend(backend);
        if (!(D > 0.0))
            throw DomainError("imperfect_terms: distance must be positive");
        const FadingParams &fad = config.fading;
        const double m = fad.m_shadow;
        const double tau = config.tau;
        const double gain = config.p_u * path_gain(D, fad.v);
        // xi1 argument tau p^2 (M-K) beta^2 = (a mu)^2
        const double a = gain * std::sqrt(tau * (config.M - config.K));
        const double b = tau * gain;

        ImperfectTerms t{{}, {}, pilot_penalty(config)};
        if (backend == Backend::Series)
        {
            // E[log2(1 + a^2 mu^2)] through Gamma(m + 2i + 2) split by the duplication formula.
            SeriesCombination xi1("imperfect_terms/xi1");
            const double x = a * a * fad.omega * fad.omega;
            if (x > 0.0)
            {
                const double log_pre = std::log(x) + (m + 1.0) * std::numbers::ln2 + specfun::log_gamma(0.5 * m + 1.0) +
                                       specfun::log_gamma(0.5 * m + 1.5) - 0.5 * std::log(std::numbers::pi) -
                                       specfun::log_gamma(m) - std::log(ln2);
                xi1.add(std::exp(log_pre), {{0.5 * m + 1.0, 0.5 * m + 1.5, 1.0, 1.0}, {2.0}, -4.0 * x});
            }
            SeriesCombination xi2("imperfect_terms/xi2");
            add_log_mean_series(xi2, 1.0, b, fad);
            t.xi1 = xi1.finish();
            t.xi2 = xi2.finish();
            return t;
        }
        t.xi1 = gamma_expectation([a](double mu) { const double s = a * mu; return log2_1p(s * s); }, m, fad.omega);
        t.xi2 = gamma_expectation([b](double mu) { return log2_1p(b * mu); }, m, fad.omega);
        return t;
    }

    EvalResult ergodic_capacity_imperfect(double D, const SystemConfig &config, Backend backend)
    {
        return capacity_from_terms(imperfect_terms(D, config, backend));
    }

    namespace
    {
        // Accumulates the inner evaluation errors of a nested quadrature.
        struct NestedError
        {
            double weighted = 0.0;
            std::size_t evaluations = 0;
        };

        EvalResult finish_nested(EvalResult outer, const NestedError &inner, double offset = 0.0)
        {
            outer.value += offset;
            outer.error_estimate += inner.weighted;
            auto &d = std::get<QuadratureDetail>(outer.detail);
            d.evaluations += inner.evaluations;
            return outer;
        }

        // 2/(R^2-R0^2) * integral_{R0}^{R} x * x^{-v} * c omega m/ln2 * 3F1(...; -c omega x^-v) dx
        // with c the coefficient of beta; the 1/(i + (v-2)/v) factor becomes a 4F2.
        void add_radial_log_mean_series(SeriesCombination &acc, double weight, double c, const SystemConfig &config)
        {
            const FadingParams &fad = config.fading;
            const CellGeometry &g = config.geometry;
            const double v = fad.v;
            const double m = fad.m_shadow;
            if (!(v > 2.0))
                throw EvaluationError("radial series form requires a path-loss exponent above 2", 0.0);
            const double a = (v - 2.0) / v;
            const double pre = weight * 2.0 * fad.omega * c * m / (ln2 * (g.R * g.R - g.R0 * g.R0) * (v - 2.0));
            for (const auto &[r, sign] : {std::pair{g.R0, 1.0}, std::pair{g.R, -1.0}})
            {
                const double z = -fad.omega * c * std::pow(r, -v);
                acc.add(sign * pre * std::pow(r, 2.0 - v), {{a, m + 1.0, 1.0, 1.0}, {a + 1.0, 2.0}, z});
            }
        }
    }

    EvalResult cell_average_perfect(const SystemConfig &config, Backend backend)
    {
        require_bound_backend(backend);
        const double c = config.p_u * (config.M - config.K);
        if (backend == Backend::Series)
        {
            SeriesCombination acc("cell_average_perfect");
            add_radial_log_mean_series(acc, 1.0, c, config);
            return acc.finish();
        }
        NestedError inner;
        const EvalResult outer = radial_average(
            [&](double x) {
                const EvalResult r = ergodic_capacity_perfect(x, config, Backend::Quadrature);
                inner.weighted = std::max(inner.weighted, r.error_estimate);
                inner.evaluations += std::get<QuadratureDetail>(r.detail).evaluations;
                return r.value;
            },
            config.geometry);
        return finish_nested(outer, inner);
    }

    EvalResult cell_average_imperfect(const SystemConfig &config, Backend backend)
    {
        require_bound_backend(backend);
        const double penalty = pilot_penalty(config);
        if (backend == Backend::Series)
        {
            const FadingParams &fad = config.fading;
            const CellGeometry &g = config.geometry;
            const double m = fad.m_shadow;
            const double v = fad.v;
            const double tau = config.tau;
            const double p = config.p_u;

            SeriesCombination acc("cell_average_imperfect");
            // xi1 part: x^{1-2v(i+1)} integrates to 1/(2v (i + (v-1)/v)), giving a 5F2.
            const double X = tau * fad.omega * fad.omega * p * p * (config.M - config.K);
            if (X > 0.0)
            {
                const double ap = (v - 1.0) / v;
                const double log_pre = std::log(X) + (m + 1.0) * std::numbers::ln2 + specfun::log_gamma(0.5 * m + 1.0) +
                                       specfun::log_gamma(0.5 * m + 1.5) - 0.5 * std::log(std::numbers::pi) -
                                       specfun::log_gamma(m) - std::log(ln2) -
                                       std::log((g.R * g.R - g.R0 * g.R0) * (v - 1.0));
                const double pre = std::exp(log_pre);
                for (const auto &[r, sign] : {std::pair{g.R0, 1.0}, std::pair{g.R, -1.0}})
                {
                    const double z = -4.0 * X * std::pow(r, -2.0 * v);
                    acc.add(sign * pre * std::pow(r, 2.0 - 2.0 * v),
                            {{ap, 0.5 * m + 1.0, 0.5 * m + 1.5, 1.0, 1.0}, {ap + 1.0, 2.0}, z});
                }
            }
            add_radial_log_mean_series(acc, -1.0, tau * p, config);
            acc.add_constant(-penalty);
            return acc.finish();
        }

        NestedError inner;
        const EvalResult outer = radial_average(
            [&](double x) {
                const ImperfectTerms t = imperfect_terms(x, config, Backend::Quadrature);
                inner.weighted = std::max(inner.weighted, t.xi1.error_estimate + t.xi2.error_estimate);
                inner.evaluations += std::get<QuadratureDetail>(t.xi1.detail).evaluations +
                                     std::get<QuadratureDetail>(t.xi2.detail).evaluations;
                return t.xi1.value - t.xi2.value;
            },
            config.geometry);
        return finish_nested(outer, inner, -penalty);
    }
}
