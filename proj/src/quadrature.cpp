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

#include "gkmimo/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace gkmimo
{
    namespace
    {
        // Kronrod abscissae on [0, 1]; odd indices are the Gauss nodes.
        constexpr std::array<double, 8> xgk = {
            0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
        constexpr std::array<double, 8> wgk = {
            0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
        constexpr std::array<double, 4> wg = {
            0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
            0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

        struct Panel
        {
            double a, b, value, error;
            bool operator<(const Panel &o) const { return error < o.error; }
        };

        Panel gauss_kronrod(const std::function<double(double)> &f, double a, double b)
        {
            const double centre = 0.5 * (a + b);
            const double half = 0.5 * (b - a);
            const double fc = f(centre);
            double kronrod = fc * wgk[7];
            double gauss = fc * wg[3];
            for (int j = 0; j < 7; ++j)
            {
                const double dx = half * xgk[j];
                const double fsum = f(centre - dx) + f(centre + dx);
                kronrod += wgk[j] * fsum;
                if (j % 2 == 1)
                    gauss += wg[j / 2] * fsum;
            }
            return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
        }
    }

    QuadratureResult integrate_adaptive(const std::function<double(double)> &f, double a, double b,
                                        const QuadratureOptions &options)
    {
        QuadratureResult result;
        if (a == b)
        {
            result.converged = true;
            return result;
        }

        std::priority_queue<Panel> panels;
        const std::size_t initial = options.initial_panels == 0 ? 1 : options.initial_panels;
        const double width = (b - a) / static_cast<double>(initial);
        double total = 0.0, error = 0.0;
        for (std::size_t i = 0; i < initial; ++i)
        {
            const double lo = a + width * static_cast<double>(i);
            const double hi = (i + 1 == initial) ? b : lo + width;
            Panel p = gauss_kronrod(f, lo, hi);
            total += p.value;
            error += p.error;
            panels.push(p);
        }
        result.evaluations = 15 * initial;

        auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

        while (error > tolerance() && panels.size() < options.max_intervals)
        {
            const Panel worst = panels.top();
            const double mid = 0.5 * (worst.a + worst.b);
            if (mid <= worst.a || mid >= worst.b)
                break; // panel at machine resolution
            panels.pop();
            const Panel left = gauss_kronrod(f, worst.a, mid);
            const Panel right = gauss_kronrod(f, mid, worst.b);
            total += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            panels.push(left);
            panels.push(right);
            result.evaluations += 30;
        }

        // Re-sum from the panels to avoid drift from the incremental updates.
        total = 0.0;
        error = 0.0;
        result.intervals = panels.size();
        std::vector<Panel> all;
        all.reserve(panels.size());
        while (!panels.empty())
        {
            all.push_back(panels.top());
            panels.pop();
        }
        for (auto it = all.rbegin(); it != all.rend(); ++it)
        {
            total += it->value;
            error += it->error;
        }
        result.value = total;
        result.error_estimate = error;
        result.converged = error <= tolerance();
        return result;
    }
}
