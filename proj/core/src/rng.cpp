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

#include "eacal/rng.hpp"

#include "eacal/errors.hpp"

#include <cmath>
#include <numbers>

namespace eacal
{

std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose)
{
    return mix64(mix64(seed) ^ mix64(~purpose));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : state_(derive_seed(seed, stream)) {}

std::uint64_t Rng::next_u64()
{
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform01()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform01();
}

double Rng::normal()
{
    if (have_cached_normal_)
    {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    // 1 - u in (0, 1] keeps the log argument away from zero
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    have_cached_normal_ = true;
    return radius * std::cos(angle);
}

std::complex<double> Rng::complex_normal()
{
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-std::log(u1)); // per-component variance 1/2
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::uint64_t Rng::poisson(double mean)
{
    if (!(mean >= 0.0))
        throw NumericalError("poisson: mean must be nonnegative");
    if (mean == 0.0)
        return 0;

    // Knuth's product method in chunks; Poisson(a + b) = Poisson(a) + Poisson(b)
    // keeps exp(-chunk) away from underflow for large means.
    std::uint64_t count = 0;
    while (mean > 0.0)
    {
        const double chunk = mean > 500.0 ? 500.0 : mean;
        mean -= chunk;
        const double limit = std::exp(-chunk);
        double prod = uniform01();
        while (prod > limit)
        {
            ++count;
            prod *= uniform01();
        }
    }
    return count;
}

} // namespace eacal
