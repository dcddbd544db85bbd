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

#include "gkmimo/config.hpp"
#include "gkmimo/error.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace gkmimo;

namespace
{
    std::size_t error_line(const std::string &text)
    {
        try
        {
            parse_config(text);
        }
        catch (const ParseError &e)
        {
            return e.line();
        }
        FAIL("expected a parse error for: " << text);
        return 0;
    }
}

TEST_CASE("empty document yields the default scenario")
{
    const SweepSpec s = parse_config("");
    CHECK(s.users == 9);
    CHECK(s.shadowing_m == std::vector<double>{3.3});
    CHECK(s.pathloss_exponent == 3.6);
    CHECK(s.cell_radius == 1000.0);
    CHECK(s.exclusion_radius == 100.0);
    CHECK(s.reference_distance == 500.0);
    CHECK_FALSE(s.pilot.length);
    CHECK(s.pilot.resolve(s.users) == 9);
    CHECK(s.csi.size() == 2);
    CHECK(s.backend == BackendSelection::Quadrature);

    const SystemConfig c = s.system_config(128, 10.0, 3.3);
    CHECK(c.tau == 9);
    CHECK(c.fading.omega == doctest::Approx(1.0 / 3.3));
    CHECK(c.p_u == doctest::Approx(10.0 * std::pow(500.0, 3.6)));
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("grid cardinality and list syntax")
{
    const SweepSpec s = parse_config("antennas = [100, 300]\npower_db = [10]\n");
    CHECK(s.grid_points() == 2);
    CHECK(s.antennas == std::vector<int>{100, 300});

    const SweepSpec r = parse_config("antennas = 50:50:450  # antenna sweep\npower_db = 5, 10, 20\n"
                                     "shadowing_m = 0.1, 0.5:0.5:2\ncsi = perfect\n");
    CHECK(r.antennas.size() == 9);
    CHECK(r.antennas.back() == 450);
    CHECK(r.power_db.size() == 3);
    CHECK(r.shadowing_m.size() == 5);
    CHECK(r.shadowing_m[4] == doctest::Approx(2.0));
    CHECK(r.grid_points() == 9 * 3 * 5);
    CHECK(r.csi == std::vector<CsiMode>{CsiMode::Perfect});
    CHECK(parse_config("csi = both").csi.size() == 2);
}

TEST_CASE("scalar keys")
{
    const SweepSpec s = parse_config("users = 4\npilot_length = 8\npathloss_exponent = 3\ncell_radius = 2000\n"
                                     "exclusion_radius = 50\nreference_distance = 250\nfast_fading_m = 2\n"
                                     "trials = 123\nseed = 99\noutput = out.csv\nbackend = both\nantennas = 16\n");
    CHECK(s.users == 4);
    CHECK(s.pilot.resolve(4) == 8);
    CHECK(s.pathloss_exponent == 3.0);
    CHECK(s.cell_radius == 2000.0);
    CHECK(s.exclusion_radius == 50.0);
    CHECK(s.reference_distance == 250.0);
    CHECK(s.fast_fading_m == 2.0);
    CHECK(s.trials == 123);
    CHECK(s.seed == 99);
    CHECK(s.output == "out.csv");
    CHECK(s.backend == BackendSelection::Both);
    CHECK(parse_config("pilot_length = K").pilot.resolve(9) == 9);
    CHECK(parse_config("power_db = -inf").power_db.front() == -INFINITY);
}

TEST_CASE("invalid documents report the offending line")
{
    CHECK(error_line("cell_radius = 100\nexclusion_radius = 100\n") == 2);
    CHECK(error_line("exclusion_radius = 1500\n") == 1);
    CHECK(error_line("\n\npilot_length = 4\n") == 3);
    CHECK(error_line("colour = blue") == 1);
    CHECK(error_line("seed = 1\nseed = 2") == 2);
    CHECK(error_line("antennas = 100,\n") == 1);
    CHECK(error_line("# c\nantennas = [100, 200\n") == 2);
    CHECK(error_line("power_db = ten") == 1);
    CHECK(error_line("antennas = 8") == 1);
    CHECK(error_line("antennas = 64.5") == 1);
    CHECK(error_line("antennas = 100:-1:50") == 1);
    CHECK(error_line("shadowing_m = 0") == 1);
    CHECK(error_line("pathloss_exponent = 7") == 1);
    CHECK(error_line("csi = partial") == 1);
    CHECK(error_line("backend = exact") == 1);
    CHECK(error_line("just some words") == 1);
    CHECK(error_line("trials = -5") == 1);
    CHECK(error_line("power_db = nan") == 1);
}

TEST_CASE("backend selection names")
{
    CHECK(parse_backend_selection("series") == BackendSelection::Series);
    CHECK(std::string(to_string(BackendSelection::Both)) == "both");
    CHECK_THROWS_AS(parse_backend_selection("fast"), ParseError);
}
