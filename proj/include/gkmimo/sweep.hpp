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
#include "gkmimo/config.hpp"
#include "gkmimo/simulator.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gkmimo
{
    // One evaluated method at one grid point.
    struct MethodOutcome
    {
        std::optional<EvalResult> result; // empty when status != "ok"
        std::string status = "ok";        // ok | diverged | error
        std::string message;
    };

    struct GridPoint
    {
        int M = 0;
        double power_db = 0.0;
        double m = 0.0;
        CsiMode csi = CsiMode::Perfect;

        std::optional<MethodOutcome> quadrature;
        std::optional<MethodOutcome> series;
        std::optional<MethodOutcome> simulated;
    };

    // Grid order: m, then P_dB, then M, then csi mode (outermost first).
    // Bound evaluations are spread over OpenMP threads; each simulation runs its trials
    // in parallel. Results are stored by grid index, so the output does not depend on
    // the thread count.
    std::vector<GridPoint> evaluate_grid(const SweepSpec &spec, bool include_quadrature, bool include_series,
                                         bool include_simulation);

    struct SweepRow
    {
        int M = 0;
        double power_db = 0.0;
        double m = 0.0;
        CsiMode csi = CsiMode::Perfect;
        std::string method; // bound-quadrature | bound-series | simulated
        double bits = 0.0;
        double error_estimate = 0.0;
        std::size_t trials = 0;
        std::uint64_t seed = 0;
        double achievable_bits = 0.0;
        std::string status = "ok";
    };

    struct SweepOutcome
    {
        std::vector<SweepRow> rows;
        bool failed = false; // a required evaluation failed
    };

    // Rows per grid point: the selected bound backends, then "simulated" when trials > 0.
    // With BackendSelection::Both a diverged series is reported but not a failure; with
    // BackendSelection::Series it is.
    SweepOutcome run_sweep(const SweepSpec &spec);

    inline constexpr const char *csv_header =
        "M,P_dB,m,csi,method,bits,error_estimate,trials,seed,achievable_bits,status";

    // Shortest round-trip decimal, independent of the C++ and C locale.
    std::string format_number(double x);

    void write_csv(std::ostream &out, const std::vector<SweepRow> &rows);

    struct InvariantCheck
    {
        std::string name;
        bool passed = true;
        double margin = 0.0;      // smallest slack seen; negative on failure
        std::size_t checked = 0;  // comparisons made
        std::string note;
    };

    struct ValidationReport
    {
        std::vector<InvariantCheck> checks;
        bool evaluation_failed = false;

        bool passed() const;
    };

    // Runs the invariant suites over the sweep grid: bound dominance by the simulator,
    // CSI ordering (bounds and simulation), monotonicity in M and series/quadrature
    // agreement wherever the series reports relative truncation error below 1e-8.
    ValidationReport validate(const SweepSpec &spec);

    void write_report(std::ostream &out, const ValidationReport &report);
}
