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

// gkmimo: capacity bounds, Monte Carlo simulation, sweeps and invariant checks.
//
//   gkmimo bound    [--config f] [point overrides] [--distance D] [--backend b]
//   gkmimo simulate [--config f] [point overrides] [--trials n] [--seed s]
//   gkmimo sweep    [--config f] [--out path] [--trials n] [--seed s] [--backend b]
//   gkmimo validate [--config f] [--trials n] [--seed s]
//
// Every subcommand accepts --threads n (or GKMIMO_THREADS).

#include "gkmimo/bounds.hpp"
#include "gkmimo/config.hpp"
#include "gkmimo/error.hpp"
#include "gkmimo/simulator.hpp"
#include "gkmimo/sweep.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_usage = 1,
        exit_parse = 2,
        exit_evaluation = 3,
        exit_invariant = 4
    };

    struct CommonOptions
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> trials;
        std::string out;
        std::optional<int> threads;
        std::string backend;

        std::vector<int> antennas;
        std::vector<double> power_db;
        std::vector<double> shadowing_m;
        std::string csi;
        std::optional<double> distance;
    };

    void add_common(CLI::App *cmd, CommonOptions &o, bool with_point)
    {
        cmd->add_option("--config", o.config, "Scenario file (key = value); defaults apply when omitted")
            ->check(CLI::ExistingFile);
        cmd->add_option("--seed", o.seed, "Base seed of the counter-based RNG");
        cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point");
        cmd->add_option("--out", o.out, "Output CSV path (stdout when omitted)");
        cmd->add_option("--threads", o.threads, "Worker threads (also GKMIMO_THREADS)")->check(CLI::PositiveNumber);
        cmd->add_option("--backend", o.backend, "Analytic backend")
            ->check(CLI::IsMember({"quadrature", "series", "both"}));
        if (with_point)
        {
            cmd->add_option("-M,--antennas", o.antennas, "Antenna counts, overriding the grid")->delimiter(',');
            cmd->add_option("-P,--power-db", o.power_db, "Received SNR at the reference distance [dB]")->delimiter(',');
            cmd->add_option("-m,--shadowing-m", o.shadowing_m, "Gamma shadowing shape")->delimiter(',');
            cmd->add_option("--csi", o.csi, "perfect, imperfect or both")
                ->check(CLI::IsMember({"perfect", "imperfect", "both"}));
        }
    }

    gkmimo::SweepSpec build_spec(const CommonOptions &o)
    {
        gkmimo::SweepSpec spec = o.config.empty() ? gkmimo::parse_config("") : gkmimo::load_config(o.config);
        if (o.seed)
            spec.seed = *o.seed;
        if (o.trials)
            spec.trials = *o.trials;
        if (!o.out.empty())
            spec.output = o.out;
        if (!o.backend.empty())
            spec.backend = gkmimo::parse_backend_selection(o.backend);
        if (!o.antennas.empty())
            spec.antennas = o.antennas;
        if (!o.power_db.empty())
            spec.power_db = o.power_db;
        if (!o.shadowing_m.empty())
            spec.shadowing_m = o.shadowing_m;
        if (!o.csi.empty())
        {
            if (o.csi == "perfect")
                spec.csi = {gkmimo::CsiMode::Perfect};
            else if (o.csi == "imperfect")
                spec.csi = {gkmimo::CsiMode::Imperfect};
            else
                spec.csi = {gkmimo::CsiMode::Perfect, gkmimo::CsiMode::Imperfect};
        }
        spec.validate();
        return spec;
    }

    void apply_threads(const CommonOptions &o)
    {
        if (o.threads)
        {
            omp_set_num_threads(*o.threads);
            return;
        }
        if (const char *env = std::getenv("GKMIMO_THREADS"))
        {
            const int n = std::atoi(env);
            if (n > 0)
                omp_set_num_threads(n);
        }
    }

    // Runs fn with the configured output stream (file or stdout).
    template <typename Fn>
    int with_output(const gkmimo::SweepSpec &spec, Fn &&fn)
    {
        if (spec.output.empty() || spec.output == "-")
            return fn(std::cout);
        std::ofstream file(spec.output, std::ios::binary);
        if (!file)
        {
            std::cerr << "gkmimo: cannot write '" << spec.output << "'\n";
            return exit_evaluation;
        }
        return fn(file);
    }

    void report_failures(const std::vector<gkmimo::SweepRow> &rows)
    {
        for (const auto &r : rows)
            if (r.status != "ok")
                std::cerr << "gkmimo: M=" << r.M << " P_dB=" << r.power_db << " m=" << r.m << " "
                          << gkmimo::to_string(r.csi) << " " << r.method << ": " << r.status << '\n';
    }

    int run_bound(const CommonOptions &o)
    {
        gkmimo::SweepSpec spec = build_spec(o);
        spec.trials = 0;
        if (!o.distance)
        {
            const gkmimo::SweepOutcome outcome = gkmimo::run_sweep(spec);
            report_failures(outcome.rows);
            return with_output(spec, [&](std::ostream &out) {
                gkmimo::write_csv(out, outcome.rows);
                return outcome.failed ? exit_evaluation : exit_ok;
            });
        }

        // Per-user bound at a fixed distance.
        std::vector<gkmimo::SweepRow> rows;
        bool failed = false;
        const bool quad = spec.backend != gkmimo::BackendSelection::Series;
        const bool series = spec.backend != gkmimo::BackendSelection::Quadrature;
        for (double m : spec.shadowing_m)
            for (double P : spec.power_db)
                for (int M : spec.antennas)
                    for (gkmimo::CsiMode csi : spec.csi)
                    {
                        const gkmimo::SystemConfig cfg = spec.system_config(M, P, m);
                        for (auto [enabled, backend, name] :
                             {std::tuple{quad, gkmimo::Backend::Quadrature, "user-bound-quadrature"},
                              std::tuple{series, gkmimo::Backend::Series, "user-bound-series"}})
                        {
                            if (!enabled)
                                continue;
                            gkmimo::SweepRow row{M, P, m, csi, name, 0, 0, 0, spec.seed, 0, "ok"};
                            try
                            {
                                const gkmimo::EvalResult r =
                                    csi == gkmimo::CsiMode::Perfect
                                        ? gkmimo::bounds::ergodic_capacity_perfect(*o.distance, cfg, backend)
                                        : gkmimo::bounds::ergodic_capacity_imperfect(*o.distance, cfg, backend);
                                row.bits = r.value;
                                row.error_estimate = r.error_estimate;
                                row.achievable_bits = r.achievable();
                            }
                            catch (const gkmimo::EvaluationError &)
                            {
                                row.status = backend == gkmimo::Backend::Series ? "diverged" : "error";
                                row.bits = row.error_estimate = row.achievable_bits = std::nan("");
                                if (backend == gkmimo::Backend::Quadrature ||
                                    spec.backend == gkmimo::BackendSelection::Series)
                                    failed = true;
                            }
                            rows.push_back(row);
                        }
                    }
        report_failures(rows);
        return with_output(spec, [&](std::ostream &out) {
            gkmimo::write_csv(out, rows);
            return failed ? exit_evaluation : exit_ok;
        });
    }

    int run_simulate(const CommonOptions &o)
    {
        gkmimo::SweepSpec spec = build_spec(o);
        if (spec.trials == 0)
            throw gkmimo::ParseError(0, "simulate needs trials > 0");
        const std::vector<gkmimo::GridPoint> grid = gkmimo::evaluate_grid(spec, false, false, true);
        std::vector<gkmimo::SweepRow> rows;
        bool failed = false;
        for (const auto &g : grid)
        {
            gkmimo::SweepRow row{g.M, g.power_db, g.m, g.csi, "simulated", 0, 0, 0, spec.seed, 0, g.simulated->status};
            if (g.simulated->result)
            {
                const auto &r = *g.simulated->result;
                row.bits = r.value;
                row.error_estimate = r.error_estimate;
                row.achievable_bits = r.achievable();
                row.trials = std::get<gkmimo::MonteCarloDetail>(r.detail).trials;
                if (const auto d = std::get<gkmimo::MonteCarloDetail>(r.detail).discarded; d > 0)
                    std::cerr << "gkmimo: discarded " << d << " ill-conditioned trials at M=" << g.M << '\n';
            }
            else
            {
                std::cerr << "gkmimo: " << g.simulated->message << '\n';
                row.bits = row.error_estimate = row.achievable_bits = std::nan("");
                failed = true;
            }
            rows.push_back(row);
        }
        return with_output(spec, [&](std::ostream &out) {
            gkmimo::write_csv(out, rows);
            return failed ? exit_evaluation : exit_ok;
        });
    }

    int run_sweep_cmd(const CommonOptions &o)
    {
        const gkmimo::SweepSpec spec = build_spec(o);
        const gkmimo::SweepOutcome outcome = gkmimo::run_sweep(spec);
        report_failures(outcome.rows);
        return with_output(spec, [&](std::ostream &out) {
            gkmimo::write_csv(out, outcome.rows);
            return outcome.failed ? exit_evaluation : exit_ok;
        });
    }

    int run_validate(const CommonOptions &o)
    {
        const gkmimo::SweepSpec spec = build_spec(o);
        const gkmimo::ValidationReport report = gkmimo::validate(spec);
        gkmimo::write_report(std::cout, report);
        if (report.evaluation_failed)
            return exit_evaluation;
        return report.passed() ? exit_ok : exit_invariant;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Ergodic-capacity bounds and Monte Carlo simulation for massive MIMO uplinks over generalized-K fading"};
    app.require_subcommand(1);

    CommonOptions bound_opts, sim_opts, sweep_opts, validate_opts;
    auto *bound = app.add_subcommand("bound", "Analytic cell-average (or per-user, with --distance) bounds");
    add_common(bound, bound_opts, true);
    bound->add_option("--distance", bound_opts.distance, "User distance in meters for the per-user bound")
        ->check(CLI::PositiveNumber);
    auto *simulate = app.add_subcommand("simulate", "Monte Carlo ZF capacity at the selected point(s)");
    add_common(simulate, sim_opts, true);
    auto *sweep = app.add_subcommand("sweep", "Evaluate the configured grid and write CSV");
    add_common(sweep, sweep_opts, true);
    auto *val = app.add_subcommand("validate", "Run the invariant suites over the configured grid");
    add_common(val, validate_opts, true);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_usage;
    }

    try
    {
        if (*bound)
        {
            apply_threads(bound_opts);
            return run_bound(bound_opts);
        }
        if (*simulate)
        {
            apply_threads(sim_opts);
            return run_simulate(sim_opts);
        }
        if (*sweep)
        {
            apply_threads(sweep_opts);
            return run_sweep_cmd(sweep_opts);
        }
        apply_threads(validate_opts);
        return run_validate(validate_opts);
    }
    catch (const gkmimo::ParseError &e)
    {
        std::cerr << "gkmimo: config error: " << e.what() << '\n';
        return exit_parse;
    }
    catch (const gkmimo::ConfigError &e)
    {
        std::cerr << "gkmimo: config error: " << e.what() << '\n';
        return exit_parse;
    }
    catch (const std::exception &e)
    {
        std::cerr << "gkmimo: evaluation error: " << e.what() << '\n';
        return exit_evaluation;
    }
}
