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

#include <cstddef>
#include <functional>

namespace gkmimo
{
    struct QuadratureOptions
    {
        double rel_tol = 1e-10;
        double abs_tol = 0.0;
        std::size_t max_intervals = 4000;
        std::size_t initial_panels = 1;
    };

    struct QuadratureResult
    {
        double value = 0.0;
        double error_estimate = 0.0; // sum of per-panel |K15 - G7|
        std::size_t evaluations = 0;
        std::size_t intervals = 0;
        bool converged = false;
    };

    // Globally adaptive 7/15-point Gauss-Kronrod on a finite [a, b]: the panel with
    // the largest error is bisected until the total error is within
    // max(abs_tol, rel_tol |value|) or max_intervals is reached.
    QuadratureResult integrate_adaptive(const std::function<double(double)> &f, double a, double b,
                                        const QuadratureOptions &options = {});
}
