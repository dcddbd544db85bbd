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

#include "gkmimo/sweep.hpp"
#include "gkmimo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace gkmimo
{
    namespace
    {
        constexpr double agreement_series_tol = 1e-8;
        constexpr double agreement_rel_tol = 1e-6;

        MethodOutcome evaluate_bound(const SystemConfig &config, CsiMode csi, Backend backend)
        {
            MethodOutcome out;
            try
            {
                out.result = csi == CsiMode::Perfect ? bounds::cell_average_perfect(config, backend)
                                                     : bounds::cell_average_imperfect(config, backend);
            }
            catch (const EvaluationError &e)
            {
                out.status = backend == Backend::Series ? "diverged" : "error";
                out.message = e.what();
            }
            catch (const std::exception &e)
            {
                out.status = "error";
                out.message = e.what();
            }
            return out;
        }

        MethodOutcome evaluate_simulation(const SystemConfig &config, CsiMode csi, std::size_t trials,
                                          std::uint64_t seed)
        {
            MethodOutcome out;
            try
            {
                out.result = run_monte_carlo(config, csi, trials, seed).to_eval_result();
            }
            catch (const std::exception &e)
            {
                out.status = "error";
                out.message = e.what();
            }
            return out;
        }
    }

    std::vector<GridPoint> evaluate_grid(const SweepSpec &spec, bool include_quadrature, bool include_series,
                                         bool include_simulation)
    {
        spec.validate();
        std::vector<GridPoint> grid;
        grid.reserve(spec.grid_points() * spec.csi.size());
        for (double m : spec.shadowing_m)
            for (double P : spec.power_db)
                for (int M : spec.antennas)
                    for (CsiMode csi : spec.csi)
                        grid.push_back({M, P, m, csi, {}, {}, {}});

        const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i)
        {
            GridPoint &g = grid[static_cast<std::size_t>(i)];
            const SystemConfig config = spec.system_config(g.M, g.power_db, g.m);
            if (include_quadrature)
                g.quadrature = evaluate_bound(config, g.csi, Backend::Quadrature);
            if (include_series)
                g.series = evaluate_bound(config, g.csi, Backend::Series);
        }

        if (include_simulation && spec.trials > 0)
            for (GridPoint &g : grid)
                g.simulated = evaluate_simulation(spec.system_config(g.M, g.power_db, g.m), g.csi, spec.trials,
                                                  spec.seed);
        return grid;
    }

    SweepOutcome run_sweep(const SweepSpec &spec)
    {
        const bool quad = spec.backend != BackendSelection::Series;
        const bool series = spec.backend != BackendSelection::Quadrature;
        const std::vector<GridPoint> grid = evaluate_grid(spec, quad, series, true);

        SweepOutcome outcome;
        auto emit = [&](const GridPoint &g, const char *method, const MethodOutcome &mo, bool required) {
            SweepRow row;
            row.M = g.M;
            row.power_db = g.power_db;
            row.m = g.m;
            row.csi = g.csi;
            row.method = method;
            row.seed = spec.seed;
            row.status = mo.status;
            if (mo.result)
            {
                row.bits = mo.result->value;
                row.error_estimate = mo.result->error_estimate;
                row.achievable_bits = mo.result->achievable();
                if (const auto *mc = std::get_if<MonteCarloDetail>(&mo.result->detail))
                    row.trials = mc->trials;
            }
            else
            {
                row.bits = std::numeric_limits<double>::quiet_NaN();
                row.error_estimate = std::numeric_limits<double>::quiet_NaN();
                row.achievable_bits = std::numeric_limits<double>::quiet_NaN();
                if (required)
                    outcome.failed = true;
            }
            outcome.rows.push_back(std::move(row));
        };

        for (const GridPoint &g : grid)
        {
            if (g.quadrature)
                emit(g, "bound-quadrature", *g.quadrature, true);
            if (g.series)
                emit(g, "bound-series", *g.series,
                     spec.backend == BackendSelection::Series || g.series->status == "error");
            if (g.simulated)
                emit(g, "simulated", *g.simulated, true);
        }
        return outcome;
    }

    std::string format_number(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), x);
        return std::string(buf, res.ptr);
    }

    void write_csv(std::ostream &out, const std::vector<SweepRow> &rows)
    {
        out << csv_header << '\n';
        for (const SweepRow &r : rows)
        {
            out << r.M << ',' << format_number(r.power_db) << ',' << format_number(r.m) << ',' << to_string(r.csi)
                << ',' << r.method << ',' << format_number(r.bits) << ',' << format_number(r.error_estimate) << ','
                << r.trials << ',' << r.seed << ',' << format_number(r.achievable_bits) << ',' << r.status << '\n';
        }
    }

    bool ValidationReport::passed() const
    {
        if (evaluation_failed)
            return false;
        return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck &c) { return c.passed; });
    }

    namespace
    {
        struct Tracker
        {
            InvariantCheck check;
            bool any = false;

            explicit Tracker(std::string name) { check.name = std::move(name); }

            void record(double margin)
            {
                ++check.checked;
                if (!any || margin < check.margin)
                    check.margin = margin;
                any = true;
                if (margin < 0.0)
                    check.passed = false;
            }

            InvariantCheck done(std::string vacuous_note = "no comparable points")
            {
                if (!any)
                    check.note = std::move(vacuous_note);
                return check;
            }
        };

        const EvalResult *ok(const std::optional<MethodOutcome> &mo)
        {
            return mo && mo->result ? &*mo->result : nullptr;
        }
    }

    ValidationReport validate(const SweepSpec &spec)
    {
        const std::vector<GridPoint> grid = evaluate_grid(spec, true, true, true);
        ValidationReport report;

        Tracker dominance("bound_dominance");
        Tracker bound_order("csi_ordering_bounds");
        Tracker sim_order("csi_ordering_simulated");
        Tracker monotone("monotone_in_antennas");
        Tracker agreement("backend_agreement");

        // (m, P, M, csi) -> grid index
        std::map<std::tuple<double, double, int, CsiMode>, const GridPoint *> index;
        for (const GridPoint &g : grid)
        {
            index[{g.m, g.power_db, g.M, g.csi}] = &g;
            if ((g.quadrature && !g.quadrature->result) || (g.simulated && !g.simulated->result) ||
                (g.series && g.series->status == "error"))
                report.evaluation_failed = true;

            const EvalResult *q = ok(g.quadrature);
            const EvalResult *s = ok(g.series);
            const EvalResult *mc = ok(g.simulated);
            if (q && mc)
                dominance.record(mc->value + mc->error_estimate - q->value);
            if (q && s)
            {
                const auto &sd = std::get<SeriesDetail>(s->detail);
                if (sd.relative_error < agreement_series_tol && q->value != 0.0)
                    agreement.record(agreement_rel_tol - std::abs(s->value - q->value) / std::abs(q->value));
            }
        }

        for (const auto &[key, g] : index)
        {
            const auto [m, P, M, csi] = key;
            if (csi == CsiMode::Perfect)
            {
                const auto it = index.find({m, P, M, CsiMode::Imperfect});
                if (it != index.end())
                {
                    const EvalResult *qp = ok(g->quadrature), *qi = ok(it->second->quadrature);
                    if (qp && qi)
                        bound_order.record(qp->value - qi->value);
                    const EvalResult *sp = ok(g->simulated), *si = ok(it->second->simulated);
                    if (sp && si)
                        sim_order.record(sp->value - si->value + sp->error_estimate + si->error_estimate);
                }
            }
        }

        // Monotonicity in M: walk each (m, P, csi) line in increasing M.
        std::map<std::tuple<double, double, CsiMode>, std::vector<std::pair<int, double>>> lines;
        for (const GridPoint &g : grid)
            if (const EvalResult *q = ok(g.quadrature))
                lines[{g.m, g.power_db, g.csi}].emplace_back(g.M, q->value);
        for (auto &[key, pts] : lines)
        {
            std::sort(pts.begin(), pts.end());
            for (std::size_t i = 1; i < pts.size(); ++i)
                if (pts[i].first > pts[i - 1].first)
                    monotone.record(pts[i].second - pts[i - 1].second);
        }

        report.checks.push_back(dominance.done(spec.trials == 0 ? "trials = 0: no simulation" : "no comparable points"));
        report.checks.push_back(bound_order.done("grid has a single csi mode"));
        report.checks.push_back(sim_order.done("grid has a single csi mode or trials = 0"));
        report.checks.push_back(monotone.done("grid has a single antenna count"));
        report.checks.push_back(agreement.done("no point where the series truncation error is below 1e-8"));
        return report;
    }

    void write_report(std::ostream &out, const ValidationReport &report)
    {
        for (const InvariantCheck &c : report.checks)
        {
            out << (c.passed ? "PASS " : "FAIL ") << c.name << " checked=" << c.checked;
            if (c.checked > 0)
                out << " min_margin=" << format_number(c.margin);
            if (!c.note.empty())
                out << " (" << c.note << ')';
            out << '\n';
        }
        if (report.evaluation_failed)
            out << "FAIL evaluation: at least one backend evaluation failed\n";
        out << (report.passed() ? "all invariants passed\n" : "invariant suite FAILED\n");
    }
}
