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

// Serial reference loop vs OpenMP trial loop, plus the analytic backends.

#include "gkmimo/bounds.hpp"
#include "gkmimo/config.hpp"
#include "gkmimo/simulator.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

namespace
{
    gkmimo::SystemConfig scenario(int M)
    {
        return gkmimo::SweepSpec{}.system_config(M, 10.0, 3.3);
    }

    void BM_TrialsSerial(benchmark::State &state)
    {
        const auto cfg = scenario(static_cast<int>(state.range(0)));
        const auto mode = state.range(1) ? gkmimo::CsiMode::Imperfect : gkmimo::CsiMode::Perfect;
        for (auto _ : state)
            benchmark::DoNotOptimize(gkmimo::trial_means(cfg, mode, 256, 1, gkmimo::Execution::Serial));
        state.SetItemsProcessed(state.iterations() * 256);
    }

    void BM_TrialsParallel(benchmark::State &state)
    {
        const auto cfg = scenario(static_cast<int>(state.range(0)));
        const auto mode = state.range(1) ? gkmimo::CsiMode::Imperfect : gkmimo::CsiMode::Perfect;
        state.counters["threads"] = omp_get_max_threads();
        for (auto _ : state)
            benchmark::DoNotOptimize(gkmimo::trial_means(cfg, mode, 256, 1, gkmimo::Execution::Parallel));
        state.SetItemsProcessed(state.iterations() * 256);
    }

    void BM_CellAveragePerfect(benchmark::State &state)
    {
        const auto cfg = scenario(static_cast<int>(state.range(0)));
        for (auto _ : state)
            benchmark::DoNotOptimize(gkmimo::bounds::cell_average_perfect(cfg).value);
    }

    void BM_CellAverageImperfect(benchmark::State &state)
    {
        const auto cfg = scenario(static_cast<int>(state.range(0)));
        for (auto _ : state)
            benchmark::DoNotOptimize(gkmimo::bounds::cell_average_imperfect(cfg).value);
    }
}

BENCHMARK(BM_TrialsSerial)->ArgsProduct({{32, 128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->ArgsProduct({{32, 128, 256}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CellAveragePerfect)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CellAverageImperfect)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
