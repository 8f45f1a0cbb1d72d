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

#include "eacal/metrics.hpp"

#include "eacal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace eacal
{

namespace
{
constexpr double pi = std::numbers::pi;
}

void MagnitudeSeries::validate() const
{
    if (values.size() != aoas.size())
        throw DataError("MagnitudeSeries: values and aoas lengths differ");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DataError("MagnitudeSeries: magnitudes must be finite and nonnegative");
    for (double a : aoas)
        if (!std::isfinite(a))
            throw DataError("MagnitudeSeries: aoas must be finite");
}

double avg_magnitude(const MagnitudeSeries &series)
{
    series.validate();
    if (series.values.empty())
        throw DataError("avg_magnitude: empty series");
    double sum = 0.0;
    for (double v : series.values)
        sum += v;
    return sum / static_cast<double>(series.values.size());
}

double amr_db(double avg, double ref_max)
{
    if (!(ref_max > 0.0))
        throw DataError("amr_db: reference maximum must be positive");
    if (!(avg >= 0.0))
        throw DataError("amr_db: average must be nonnegative");
    if (avg == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(avg / ref_max);
}

double par_db(const MagnitudeSeries &series)
{
    const double mean = avg_magnitude(series);
    if (!(mean > 0.0))
        throw DataError("par_db: all-zero series");
    const double peak = *std::max_element(series.values.begin(), series.values.end());
    return 20.0 * std::log10(peak / mean);
}

std::size_t sector_of(double aoa, std::size_t n_sectors)
{
    if (n_sectors < 1)
        throw DataError("sector_of: need at least one sector");
    double a = aoa;
    if (a == pi)
        a = -pi; // (-pi, pi] onto [-pi, pi)
    const double width = 2.0 * pi / static_cast<double>(n_sectors);
    auto idx = static_cast<std::ptrdiff_t>(std::floor((a + pi) / width));
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(n_sectors) - 1);
    return static_cast<std::size_t>(idx);
}

SectorStats sector_average(const MagnitudeSeries &series, std::size_t n_sectors)
{
    series.validate();
    if (n_sectors < 1)
        throw DataError("sector_average: need at least one sector");

    SectorStats stats;
    stats.n_sectors = n_sectors;
    const double width = 2.0 * pi / static_cast<double>(n_sectors);
    stats.centers.resize(n_sectors);
    for (std::size_t k = 0; k < n_sectors; ++k)
        stats.centers[k] = -pi + (static_cast<double>(k) + 0.5) * width;

    stats.counts.assign(n_sectors, 0);
    std::vector<double> sums(n_sectors, 0.0);
    for (std::size_t i = 0; i < series.values.size(); ++i)
    {
        const std::size_t k = sector_of(series.aoas[i], n_sectors);
        sums[k] += series.values[i];
        ++stats.counts[k];
    }

    stats.means.assign(n_sectors, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < n_sectors; ++k)
        if (stats.counts[k] > 0)
            stats.means[k] = sums[k] / static_cast<double>(stats.counts[k]);
    return stats;
}

MagnitudeSeries squared(const MagnitudeSeries &series)
{
    MagnitudeSeries out = series;
    for (double &v : out.values)
        v *= v;
    return out;
}

} // namespace eacal
