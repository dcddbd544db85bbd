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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "gkmimo/bounds.hpp"
#include "gkmimo/config.hpp"
#include "gkmimo/error.hpp"
#include "gkmimo/simulator.hpp"
#include "gkmimo/specfun.hpp"
#include "gkmimo/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gkmimo;

namespace
{
    SystemConfig scenario(int M, double power_db, double m = 3.3)
    {
        SweepSpec spec;
        return spec.system_config(M, power_db, m);
    }

    struct Criterion
    {
        std::string id;
        bool passed = true;
        std::string detail;

        void require(bool ok, const std::string &what)
        {
            passed = passed && ok;
            if (!detail.empty())
                detail += "; ";
            detail += what + (ok ? "" : " [FAILED]");
        }
    };

    std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf, f, a, b, c, d);
        return buf;
    }

    struct Running
    {
        double sum = 0.0, sum2 = 0.0;
        std::size_t n = 0;
        void add(double x)
        {
            sum += x;
            sum2 += x * x;
            ++n;
        }
        double mean() const { return sum / n; }
        double half_width() const
        {
            const double mu = mean();
            return ci_z * std::sqrt(std::max(0.0, sum2 / n - mu * mu) / (n - 1));
        }
    };

    // Ratio a/b of independent estimates with a delta-method 95% half-width.
    std::pair<double, double> ratio_ci(const MonteCarloEstimate &a, const MonteCarloEstimate &b)
    {
        const double r = a.mean_bits / b.mean_bits;
        const double ra = a.ci_half_width / a.mean_bits, rb = b.ci_half_width / b.mean_bits;
        return {r, r * std::sqrt(ra * ra + rb * rb)};
    }

    Criterion ac1()
    {
        Criterion c{"AC1 antenna gain M=300 vs M=100 (P=10 dB, m=3.3)", true, ""};
        const double lo = bounds::cell_average_perfect(scenario(100, 10.0)).value;
        const double hi = bounds::cell_average_perfect(scenario(300, 10.0)).value;
        const double r = hi / lo;
        c.require(std::abs(r - 1.20) <= 0.05, fmt("bound ratio %.4f (target 1.20 +- 0.05)", r));

        const auto t0 = std::chrono::steady_clock::now();
        const MonteCarloEstimate s100 = run_perfect_csi(scenario(100, 10.0), 100000, 101);
        const MonteCarloEstimate s300 = run_perfect_csi(scenario(300, 10.0), 100000, 301);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto [rs, hw] = ratio_ci(s300, s100);
        c.require(std::abs(rs - 1.20) <= 0.05 + hw,
                  fmt("simulated ratio %.4f +- %.4f over 1e5 trials (target 1.20 +- 0.05)", rs, hw));
        c.require(secs < 120.0, fmt("simulation time %.1f s (< 120 s)", secs));
        return c;
    }

    Criterion ac2()
    {
        Criterion c{"AC2 imperfect-CSI loss at M=250 (P=10 dB, tau=K=9)", true, ""};
        const SystemConfig cfg = scenario(250, 10.0);
        const double p = bounds::cell_average_perfect(cfg).value;
        const double i = bounds::cell_average_imperfect(cfg).value;
        const double loss = (p - i) / p;
        c.require(std::abs(loss - 0.12) <= 0.05,
                  fmt("perfect %.4f, imperfect %.4f, relative loss %.4f (target 0.12 +- 0.05)", p, i, loss));
        return c;
    }

    Criterion shadowing_ratio(const char *id, double m_hi, double m_lo, double target, double tol)
    {
        Criterion c{id, true, ""};
        const double hi = bounds::cell_average_perfect(scenario(128, 20.0, m_hi)).value;
        const double lo = bounds::cell_average_perfect(scenario(128, 20.0, m_lo)).value;
        const double r = hi / lo;
        c.require(std::abs(r - target) <= tol,
                  fmt("%.4f / %.4f = %.4f", hi, lo, r) + fmt(" (target %.2f +- %.2f)", target, tol));
        return c;
    }

    Criterion ac5()
    {
        Criterion c{"AC5 bound dominance over 72 cells, 1e4 trials each", true, ""};
        const auto t0 = std::chrono::steady_clock::now();
        int cells = 0, below = 0, outside_ci = 0;
        double worst = INFINITY;
        std::uint64_t seed = 5000;
        for (int M : {32, 64, 128, 256})
            for (double P : {5.0, 10.0, 20.0})
                for (double m : {0.5, 1.0, 3.3})
                {
                    const SystemConfig cfg = scenario(M, P, m);
                    const double bp = bounds::cell_average_perfect(cfg).value;
                    const double bi = bounds::cell_average_imperfect(cfg).value;
                    const MonteCarloEstimate sp = run_perfect_csi(cfg, 10000, ++seed);
                    const MonteCarloEstimate si = run_imperfect_csi(cfg, 10000, ++seed);
                    for (auto [sim, bound] : {std::pair{sp, bp}, std::pair{si, bi}})
                    {
                        ++cells;
                        const double margin = sim.mean_bits - bound;
                        below += margin < 0.0;
                        outside_ci += margin + sim.ci_half_width < 0.0;
                        worst = std::min(worst, (margin + sim.ci_half_width));
                    }
                }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.require(cells == 72, fmt("%.0f cells", cells));
        c.require(outside_ci == 0, fmt("%.0f cells below the bound beyond the CI (%.0f below within CI), "
                                       "min(sim + ci - bound) = %.4g",
                                       outside_ci, below, worst));
        c.require(secs < 900.0, fmt("runtime %.1f s (< 900 s)", secs));
        return c;
    }

    Criterion ac6()
    {
        Criterion c{"AC6 oracle agreement (1e7-sample Monte Carlo, series vs quadrature)", true, ""};
        const SystemConfig cfg = scenario(128, 10.0);
        const double D = 500.0, R = cfg.geometry.R, R0 = cfg.geometry.R0, v = cfg.fading.v;
        const double m = cfg.fading.m_shadow;
        std::mt19937_64 gen(20260101);
        std::gamma_distribution<double> mu(m, 1.0 / m);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Running t1, t2, t3, t4;
        const double c_perfect = cfg.p_u * (cfg.M - cfg.K);
        for (int i = 0; i < 10000000; ++i)
        {
            const double beta_d = mu(gen) * std::pow(D, -v);
            t1.add(std::log2(1.0 + c_perfect * beta_d));
            t3.add(bounds::pointwise_bound_imperfect(beta_d, cfg));
            const double x = std::sqrt(R0 * R0 + u(gen) * (R * R - R0 * R0));
            const double beta_x = mu(gen) * std::pow(x, -v);
            t2.add(std::log2(1.0 + c_perfect * beta_x));
            t4.add(bounds::pointwise_bound_imperfect(beta_x, cfg));
        }
        const double q1 = bounds::ergodic_capacity_perfect(D, cfg).value;
        const double q2 = bounds::cell_average_perfect(cfg).value;
        const double q3 = bounds::ergodic_capacity_imperfect(D, cfg).value;
        const double q4 = bounds::cell_average_imperfect(cfg).value;
        const char *names[] = {"per-user perfect", "cell perfect", "per-user imperfect", "cell imperfect"};
        const double qs[] = {q1, q2, q3, q4};
        const Running *mcs[] = {&t1, &t2, &t3, &t4};
        for (int k = 0; k < 4; ++k)
        {
            const double gap = std::abs(qs[k] - mcs[k]->mean());
            c.require(gap <= 3.0 * mcs[k]->half_width(),
                      std::string(names[k]) + fmt(" %.6f vs %.6f, |diff| = %.2f half-widths", qs[k], mcs[k]->mean(),
                                                  gap / mcs[k]->half_width()));
        }

        // Series cross-check wherever its truncation error is below 1e-8.
        std::size_t compared = 0;
        double worst = 0.0;
        for (double P = -110.0; P <= 20.0; P += 10.0)
            for (int M : {32, 128, 512})
                for (double mm : {0.5, 1.0, 3.3, 5.0})
                {
                    const SystemConfig s = scenario(M, P, mm);
                    std::vector<std::pair<std::function<EvalResult()>, std::function<EvalResult()>>> pairs = {
                        {[&] { return bounds::ergodic_capacity_perfect(D, s); },
                         [&] { return bounds::ergodic_capacity_perfect(D, s, Backend::Series); }},
                        {[&] { return bounds::ergodic_capacity_imperfect(D, s); },
                         [&] { return bounds::ergodic_capacity_imperfect(D, s, Backend::Series); }},
                        {[&] { return bounds::cell_average_perfect(s); },
                         [&] { return bounds::cell_average_perfect(s, Backend::Series); }},
                        {[&] { return bounds::cell_average_imperfect(s); },
                         [&] { return bounds::cell_average_imperfect(s, Backend::Series); }},
                    };
                    for (auto &[quad, series] : pairs)
                    {
                        try
                        {
                            const EvalResult sr = series();
                            if (std::get<SeriesDetail>(sr.detail).relative_error >= 1e-8)
                                continue;
                            const double qv = quad().value;
                            worst = std::max(worst, std::abs(sr.value - qv) / std::abs(qv));
                            ++compared;
                        }
                        catch (const EvaluationError &)
                        {
                        }
                    }
                }
        c.require(compared > 0 && worst < 1e-6,
                  fmt("series vs quadrature at %.0f reliable points, worst relative gap %.2e (< 1e-6)",
                      static_cast<double>(compared), worst));
        return c;
    }

    Criterion ac7()
    {
        Criterion c{"AC7 identities", true, ""};
        double dup = 0.0;
        for (double x = 0.1; x <= 50.0; x += 0.01)
        {
            const auto [l, r] = specfun::duplication_check(x);
            dup = std::max(dup, std::abs(l - r) / l);
        }
        c.require(dup <= 1e-10, fmt("duplication worst %.2e (<= 1e-10)", dup));

        double poch = 0.0;
        for (double m = 0.01; m <= 20.0; m += 0.01)
            for (unsigned i = 0; i <= 30; ++i)
            {
                const double a = specfun::pochhammer(m, i);
                const double b = std::exp(specfun::log_gamma(m + i) - specfun::log_gamma(m));
                poch = std::max(poch, std::abs(a - b) / b);
            }
        c.require(poch <= 1e-9, fmt("Pochhammer-gamma worst %.2e (<= 1e-9)", poch));

        const double f21 = specfun::pfq_series({{1.0, 1.0}, {2.0}, 0.5}, 1000).value;
        c.require(std::abs(f21 - 1.3862944) <= 1e-7 && std::abs(f21 - 2.0 * std::log(2.0)) <= 1e-9,
                  fmt("2F1(1,1;2;0.5) = %.10f", f21));

        const double ge = bounds::gamma_expectation([](double x) { return std::log1p(x); }, 1.0, 1.0).value;
        c.require(std::abs(ge - 0.596347) <= 1e-6, fmt("E[ln(1+mu)] at m=omega=1: %.8f nats", ge));
        return c;
    }

    Criterion ac8()
    {
        Criterion c{"AC8 MMSE pipeline", true, ""};
        SystemConfig cfg = scenario(32, 10.0);
        const std::size_t trials = 100000;
        // Per-user error variance ratio, pooled over all antennas of each column.
        double worst = 0.0;
        std::vector<double> ratio_sum(cfg.K, 0.0);
        for (std::size_t t = 0; t < trials; ++t)
        {
            RandomStream rng(808, t);
            std::vector<double> d(cfg.K);
            for (auto &x : d)
                x = sample_user_distance(cfg.geometry, rng);
            const ChannelRealization ch = realize_channel(cfg, d, rng);
            const Eigen::MatrixXcd G_hat = estimate_channel_mmse(ch, cfg, rng);
            for (int k = 0; k < cfg.K; ++k)
            {
                const double expected = ch.beta[k] / (cfg.tau * cfg.p_u * ch.beta[k] + 1.0);
                ratio_sum[k] += (G_hat.col(k) - ch.G.col(k)).squaredNorm() / (cfg.M * expected);
            }
        }
        for (double s : ratio_sum)
            worst = std::max(worst, std::abs(s / trials - 1.0));
        c.require(worst <= 0.02, fmt("error variance / (beta/(tau p beta + 1)) worst deviation %.4f (<= 0.02)", worst));

        SystemConfig long_pilot = scenario(64, 10.0);
        long_pilot.tau = 1000000000;
        const MonteCarloEstimate ip = run_imperfect_csi(long_pilot, 10000, 909);
        const MonteCarloEstimate pp = run_perfect_csi(long_pilot, 10000, 909);
        c.require(std::abs(ip.mean_bits - pp.mean_bits) <= pp.ci_half_width,
                  fmt("tau p -> inf: imperfect %.6f vs perfect %.6f +- %.4f", ip.mean_bits, pp.mean_bits,
                      pp.ci_half_width));
        return c;
    }

    Criterion ac9()
    {
        Criterion c{"AC9 deterministic sweep CSV", true, ""};
        SweepSpec spec = parse_config("antennas = 32, 128\npower_db = 5, 20\nshadowing_m = 0.5, 3.3\n"
                                      "csi = both\ntrials = 1000\nseed = 77\nbackend = both\n");
        auto csv = [&] {
            std::ostringstream out;
            write_csv(out, run_sweep(spec).rows);
            return out.str();
        };
        omp_set_num_threads(1);
        const std::string ref = csv();
        c.require(csv() == ref, "repeat run identical");
        for (int threads : {2, 4})
        {
            omp_set_num_threads(threads);
            c.require(csv() == ref, fmt("%.0f threads identical", threads));
        }
        omp_set_num_threads(1);
        c.require(ref.size() > 100, fmt("%.0f bytes", static_cast<double>(ref.size())));
        return c;
    }
}

int main()
{
    const std::vector<std::function<Criterion()>> criteria = {
        ac1,
        ac2,
        [] { return shadowing_ratio("AC3 shadowing m=1 vs m=0.1 (M=128, P=20 dB)", 1.0, 0.1, 1.93, 0.15); },
        [] { return shadowing_ratio("AC4 shadowing m=5 vs m=2 (M=128, P=20 dB)", 5.0, 2.0, 1.02, 0.02); },
        ac5,
        ac6,
        ac7,
        ac8,
        ac9,
    };
    int failures = 0;
    for (const auto &run : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Criterion c;
        try
        {
            c = run();
        }
        catch (const std::exception &e)
        {
            c.passed = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %s: %s (%.1f s)\n", c.passed ? "PASS" : "FAIL", c.id.c_str(), c.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !c.passed;
    }
    std::printf("%s: %d of %zu criteria passed\n", failures ? "FAIL" : "PASS",
                static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures ? 1 : 0;
}
