// SPDX-License-Identifier: Apache-2.0
//
// eacal - extended-antenna channel snapshot simulation and calibration
// Copyright (C) 2026 eacal contributors
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

#include "eacal/campaign.hpp"
#include "eacal/estimator.hpp"

#include <benchmark/benchmark.h>

namespace
{

eacal::SimulationOutput scaled_campaign(std::size_t m_count)
{
    eacal::CampaignConfig cfg = eacal::CampaignConfig::preset("C");
    cfg.pulse.n_samples = 256;
    cfg.n_snapshots = m_count;
    cfg.anchor_radius_m = 1.0;
    cfg.noise.variance = 1e-3;
    cfg.grid = eacal::GridSpec::centered({0, 0}, 0.4, 0.04);
    cfg.seed = 11;
    return eacal::run_simulation(cfg);
}

void bm_score_sweep(benchmark::State &state)
{
    const auto sim = scaled_campaign(static_cast<std::size_t>(state.range(0)));
    const eacal::GridSpec grid = eacal::GridSpec::centered({0, 0}, 0.4, 0.04);

    std::vector<eacal::SignalVector> residuals;
    for (const auto &snap : sim.snapshots.snapshots)
        residuals.push_back(snap.r);

    for (auto _ : state)
    {
        double best = 0.0;
        for (std::size_t iy = 0; iy < grid.ny(); ++iy)
            for (std::size_t ix = 0; ix < grid.nx(); ++ix)
            {
                const auto s = eacal::score_candidate(grid.node(ix, iy), residuals, sim.snapshots);
                if (s && *s > best)
                    best = *s;
            }
        benchmark::DoNotOptimize(best);
    }
    state.SetItemsProcessed(state.iterations() * grid.nx() * grid.ny() * state.range(0));
}
BENCHMARK(bm_score_sweep)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void bm_calibrate(benchmark::State &state)
{
    const auto sim = scaled_campaign(32);
    const eacal::GridSpec grid = eacal::GridSpec::centered({0, 0}, 0.4, 0.04);
    eacal::CalibrateOptions options;
    options.stopping.max_points = 8;
    options.n_threads = static_cast<unsigned>(state.range(0));

    for (auto _ : state)
    {
        benchmark::DoNotOptimize(eacal::calibrate(sim.snapshots, grid, options, 1e-3));
    }
}
BENCHMARK(bm_calibrate)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

} // namespace
