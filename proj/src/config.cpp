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

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace gkmimo
{
    const char *to_string(BackendSelection b)
    {
        switch (b)
        {
        case BackendSelection::Quadrature:
            return "quadrature";
        case BackendSelection::Series:
            return "series";
        case BackendSelection::Both:
            return "both";
        }
        return "unknown";
    }

    BackendSelection parse_backend_selection(std::string_view text)
    {
        if (text == "quadrature")
            return BackendSelection::Quadrature;
        if (text == "series")
            return BackendSelection::Series;
        if (text == "both")
            return BackendSelection::Both;
        throw ParseError(0, "backend must be quadrature, series or both (got '" + std::string(text) + "')");
    }

    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        std::vector<std::string_view> split_list(std::string_view value, std::size_t line)
        {
            value = trim(value);
            if (!value.empty() && value.front() == '[')
            {
                if (value.back() != ']')
                    throw ParseError(line, "unterminated '[' in list value");
                value = trim(value.substr(1, value.size() - 2));
            }
            std::vector<std::string_view> items;
            if (value.empty())
                throw ParseError(line, "empty value");
            std::size_t start = 0;
            while (true)
            {
                const auto comma = value.find(',', start);
                const auto item = trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
                if (item.empty())
                    throw ParseError(line, "empty list element");
                items.push_back(item);
                if (comma == std::string_view::npos)
                    break;
                start = comma + 1;
            }
            return items;
        }

        double parse_double(std::string_view s, std::size_t line)
        {
            double out = 0.0;
            const char *first = s.data();
            const char *last = s.data() + s.size();
            if (first != last && *first == '+')
                ++first;
            const auto [ptr, ec] = std::from_chars(first, last, out);
            if (ec != std::errc() || ptr != last)
                throw ParseError(line, "expected a number, got '" + std::string(s) + "'");
            return out;
        }

        long long parse_integer(std::string_view s, std::size_t line)
        {
            long long out = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw ParseError(line, "expected an integer, got '" + std::string(s) + "'");
            return out;
        }

        std::uint64_t parse_unsigned(std::string_view s, std::size_t line)
        {
            std::uint64_t out = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw ParseError(line, "expected a nonnegative integer, got '" + std::string(s) + "'");
            return out;
        }

        // "a:step:b" expands inclusively; the stop value is reached within 1e-9 relative slack.
        std::vector<double> parse_number_list(std::string_view value, std::size_t line)
        {
            std::vector<double> out;
            for (std::string_view item : split_list(value, line))
            {
                const auto c1 = item.find(':');
                if (c1 == std::string_view::npos)
                {
                    out.push_back(parse_double(item, line));
                    continue;
                }
                const auto c2 = item.find(':', c1 + 1);
                if (c2 == std::string_view::npos)
                    throw ParseError(line, "range must be start:step:stop");
                const double start = parse_double(trim(item.substr(0, c1)), line);
                const double step = parse_double(trim(item.substr(c1 + 1, c2 - c1 - 1)), line);
                const double stop = parse_double(trim(item.substr(c2 + 1)), line);
                if (!(step > 0.0) || stop < start)
                    throw ParseError(line, "range needs a positive step and stop >= start");
                const double count = std::floor((stop - start) / step * (1.0 + 1e-12) + 1e-9);
                if (count > 1e6)
                    throw ParseError(line, "range expands to too many points");
                for (int i = 0; i <= static_cast<int>(count); ++i)
                    out.push_back(start + i * step);
            }
            return out;
        }

        std::vector<int> parse_int_list(std::string_view value, std::size_t line)
        {
            std::vector<int> out;
            for (double x : parse_number_list(value, line))
            {
                if (std::floor(x) != x || std::abs(x) > 1e9)
                    throw ParseError(line, "expected integer values");
                out.push_back(static_cast<int>(x));
            }
            return out;
        }

        std::vector<CsiMode> parse_csi_list(std::string_view value, std::size_t line)
        {
            std::vector<CsiMode> out;
            for (std::string_view item : split_list(value, line))
            {
                if (item == "perfect")
                    out.push_back(CsiMode::Perfect);
                else if (item == "imperfect")
                    out.push_back(CsiMode::Imperfect);
                else if (item == "both")
                {
                    out.push_back(CsiMode::Perfect);
                    out.push_back(CsiMode::Imperfect);
                }
                else
                    throw ParseError(line, "csi must be perfect, imperfect or both (got '" + std::string(item) + "')");
            }
            return out;
        }

        std::string_view single(std::string_view value, std::size_t line)
        {
            const auto items = split_list(value, line);
            if (items.size() != 1)
                throw ParseError(line, "expected a single value");
            return items.front();
        }
    }

    void SweepSpec::validate() const
    {
        auto fail = [this](std::string_view key, const std::string &msg) {
            const auto it = key_lines.find(key);
            throw ParseError(it == key_lines.end() ? 0 : it->second, std::string(key) + ": " + msg);
        };

        if (antennas.empty() || power_db.empty() || shadowing_m.empty() || csi.empty())
            fail("grid", "every grid axis needs at least one value");
        if (users < 1)
            fail("users", "at least one user is required");
        for (int M : antennas)
            if (M <= users)
                fail("antennas", "every antenna count must exceed the number of users (" + std::to_string(M) + " <= " +
                                     std::to_string(users) + ")");
        for (double P : power_db)
            if (std::isnan(P) || P == INFINITY)
                fail("power_db", "values must be finite (or -inf for zero power)");
        for (double m : shadowing_m)
            if (!(m > 0.0) || std::isinf(m))
                fail("shadowing_m", "shape parameters must be positive");
        if (pilot.length && *pilot.length < users)
            fail("pilot_length", "pilot length " + std::to_string(*pilot.length) + " is shorter than K = " +
                                     std::to_string(users));
        if (!(pathloss_exponent >= 2.0 && pathloss_exponent <= 6.0))
            fail("pathloss_exponent", "must lie in [2, 6]");
        if (!(exclusion_radius > 0.0))
            fail("exclusion_radius", "must be positive");
        if (!(exclusion_radius < cell_radius))
            fail(key_lines.count("exclusion_radius") ? "exclusion_radius" : "cell_radius",
                 "exclusion radius must be smaller than the cell radius");
        if (!(reference_distance > 0.0))
            fail("reference_distance", "must be positive");
        if (!(fast_fading_m >= 0.5))
            fail("fast_fading_m", "must be at least 0.5");
    }

    SystemConfig SweepSpec::system_config(int M, double P_dB, double m) const
    {
        SystemConfig c;
        c.M = M;
        c.K = users;
        c.tau = pilot.resolve(users);
        c.p_u = transmit_snr_from_db(P_dB, pathloss_exponent, reference_distance);
        c.geometry = {cell_radius, exclusion_radius, users};
        c.fading = FadingParams::mean_normalized(m, pathloss_exponent, fast_fading_m);
        return c;
    }

    SweepSpec parse_config(std::string_view text)
    {
        SweepSpec spec;
        using Handler = std::function<void(std::string_view, std::size_t)>;
        const std::map<std::string, Handler, std::less<>> handlers = {
            {"antennas", [&](auto v, auto l) { spec.antennas = parse_int_list(v, l); }},
            {"power_db", [&](auto v, auto l) { spec.power_db = parse_number_list(v, l); }},
            {"shadowing_m", [&](auto v, auto l) { spec.shadowing_m = parse_number_list(v, l); }},
            {"csi", [&](auto v, auto l) { spec.csi = parse_csi_list(v, l); }},
            {"users", [&](auto v, auto l) {
                 const long long k = parse_integer(single(v, l), l);
                 if (k < 1 || k > 100000)
                     throw ParseError(l, "users must be a positive integer");
                 spec.users = static_cast<int>(k);
             }},
            {"pilot_length", [&](auto v, auto l) {
                 const auto s = single(v, l);
                 if (s == "K")
                     spec.pilot.length.reset();
                 else
                 {
                     const long long t = parse_integer(s, l);
                     if (t < 1 || t > 1000000)
                         throw ParseError(l, "pilot_length must be K or a positive integer");
                     spec.pilot.length = static_cast<int>(t);
                 }
             }},
            {"pathloss_exponent", [&](auto v, auto l) { spec.pathloss_exponent = parse_double(single(v, l), l); }},
            {"cell_radius", [&](auto v, auto l) { spec.cell_radius = parse_double(single(v, l), l); }},
            {"exclusion_radius", [&](auto v, auto l) { spec.exclusion_radius = parse_double(single(v, l), l); }},
            {"reference_distance", [&](auto v, auto l) { spec.reference_distance = parse_double(single(v, l), l); }},
            {"fast_fading_m", [&](auto v, auto l) { spec.fast_fading_m = parse_double(single(v, l), l); }},
            {"trials", [&](auto v, auto l) { spec.trials = parse_unsigned(single(v, l), l); }},
            {"seed", [&](auto v, auto l) { spec.seed = parse_unsigned(single(v, l), l); }},
            {"output", [&](auto v, auto l) { spec.output = std::string(single(v, l)); }},
            {"backend", [&](auto v, auto l) {
                 try
                 {
                     spec.backend = parse_backend_selection(single(v, l));
                 }
                 catch (const ParseError &e)
                 {
                     throw ParseError(l, e.what());
                 }
             }},
        };

        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            const auto eol = text.find('\n', pos);
            std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;

            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;

            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError(line_no, "expected 'key = value'");
            const std::string_view key = trim(line.substr(0, eq));
            const std::string_view value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ParseError(line_no, "missing key before '='");

            const auto handler = handlers.find(key);
            if (handler == handlers.end())
                throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
            if (spec.key_lines.count(key))
                throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
            spec.key_lines.emplace(std::string(key), line_no);
            handler->second(value, line_no);
        }

        spec.validate();
        return spec;
    }

    SweepSpec load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ParseError(0, "cannot open config file '" + path.string() + "'");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return parse_config(buffer.str());
    }
}
