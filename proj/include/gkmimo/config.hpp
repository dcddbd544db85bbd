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
#include "gkmimo/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gkmimo
{
    // Which analytic backends a sweep reports.
    enum class BackendSelection
    {
        Quadrature,
        Series,
        Both
    };

    const char *to_string(BackendSelection b);
    BackendSelection parse_backend_selection(std::string_view text);

    // Pilot length: tau = K unless an explicit length is given.
    struct PilotRule
    {
        std::optional<int> length;

        int resolve(int users) const { return length ? *length : users; }
    };

    struct SweepSpec
    {
        // grid axes
        std::vector<int> antennas{128};
        std::vector<double> power_db{10.0};
        std::vector<double> shadowing_m{3.3};
        std::vector<CsiMode> csi{CsiMode::Perfect, CsiMode::Imperfect};

        // fixed parameters
        int users = 9;
        PilotRule pilot;
        double pathloss_exponent = 3.6;
        double cell_radius = 1000.0;
        double exclusion_radius = 100.0;
        double reference_distance = default_reference_distance;
        double fast_fading_m = 1.0;

        std::size_t trials = 10000;
        std::uint64_t seed = 1;
        std::string output; // empty: stdout
        BackendSelection backend = BackendSelection::Quadrature;

        // 1-based line of each key in the source document, for error context.
        std::map<std::string, std::size_t, std::less<>> key_lines;

        std::size_t grid_points() const { return antennas.size() * power_db.size() * shadowing_m.size(); }

        // Throws ParseError naming the offending key and its line.
        void validate() const;

        // Shadowing scale is mean-normalized (omega = 1/m).
        SystemConfig system_config(int M, double power_db, double m) const;
    };

    // Flat "key = value[, value ...]" document; '#' starts a comment. Numeric lists accept
    // "start:step:stop" ranges. Omitted keys keep their defaults. The keys are listed in
    // docs/config_format.md.
    SweepSpec parse_config(std::string_view text);

    SweepSpec load_config(const std::filesystem::path &path);
}
