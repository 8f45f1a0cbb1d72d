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

#include "eacal/waveform.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace
{

void bm_baseband_pulse(benchmark::State &state)
{
    const eacal::PulseSpec spec;
    double t = 0.0;
    for (auto _ : state)
    {
        t += 1e-12;
        benchmark::DoNotOptimize(eacal::baseband_pulse(spec, t));
    }
}
BENCHMARK(bm_baseband_pulse);

void bm_sample_pulse(benchmark::State &state)
{
    eacal::PulseSpec spec;
    spec.n_samples = static_cast<std::size_t>(state.range(0));
    std::vector<double> buf(spec.n_samples);
    double delay = 3.1e-9;
    for (auto _ : state)
    {
        delay += 1e-13; // avoid a fixed phase pattern
        eacal::sample_pulse(spec, delay, buf);
        benchmark::DoNotOptimize(buf.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_sample_pulse)->Arg(256)->Arg(512);

void bm_synthesize_snapshot(benchmark::State &state)
{
    eacal::PulseSpec spec;
    spec.n_samples = 512;
    const eacal::Point2 agent{0, 0}, anchor{2.5, 0};
    const std::vector<eacal::ScatterContribution> scatterers{
        {{-0.1, 0.05}, {0.2, 0.1}}, {{-0.15, -0.1}, {0.1, -0.05}}, {{0.05, 0.2}, {-0.1, 0.2}}};
    const eacal::NoiseSpec noise{1e-3, 7};
    std::uint64_t stream = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(eacal::synthesize(spec, agent, anchor, 1.0, scatterers, noise, stream++));
    }
}
BENCHMARK(bm_synthesize_snapshot);

} // namespace
