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

#ifndef EACAL_METRICS_HPP
#define EACAL_METRICS_HPP

#include <cstddef>
#include <vector>

namespace eacal
{

// Per-snapshot magnitudes (|alpha_m| or |beta_mj|) with their angles of
// arrival.
struct MagnitudeSeries
{
    std::vector<double> values; // nonnegative
    std::vector<double> aoas;   // radians, one per value

    void validate() const;
};

// Uniform angular sectors over (-pi, pi]. Empty sectors keep count 0 and a
// NaN mean; they are never silently zero.
struct SectorStats
{
    std::size_t n_sectors = 0;
    std::vector<double> centers;
    std::vector<double> means;
    std::vector<std::size_t> counts;
};

// Arithmetic mean of the magnitudes.
double avg_magnitude(const MagnitudeSeries &series);

// Average magnitude ratio in dB: 20 log10(avg / ref_max). An average of
// exactly zero yields -infinity.
double amr_db(double avg, double ref_max);

// Peak-to-average ratio in dB: 20 log10(max / mean); 0 dB for a constant
// (isotropic) series.
double par_db(const MagnitudeSeries &series);

// Sector index of an angle; +pi wraps onto -pi so the half-open sectors
// [lo, hi) starting at -pi cover every input.
std::size_t sector_of(double aoa, std::size_t n_sectors);

// Mean of the values falling in each of n uniform angular sectors. Feed
// squared values to get the squared-magnitude convention used for angular
// plots.
SectorStats sector_average(const MagnitudeSeries &series, std::size_t n_sectors);

// The same series with every value squared.
MagnitudeSeries squared(const MagnitudeSeries &series);

} // namespace eacal

#endif
