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

#ifndef EACAL_RNG_HPP
#define EACAL_RNG_HPP

#include <complex>
#include <cstdint>

namespace eacal
{

// 64-bit finalizer (splitmix64 step). Used for seed derivation and as the
// core of the generator below.
std::uint64_t mix64(std::uint64_t z);

// Derives an independent sub-seed from a master seed and a purpose tag, so
// that point sampling, mark generation and per-snapshot noise never share a
// stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose);

// Small deterministic generator (splitmix64). Deliberately not a std::
// engine: the standard distributions are implementation-defined, and the
// snapshot files this library writes must be bit-reproducible for a given
// (seed, stream) key on any platform.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Keyed substream, e.g. (noise seed, snapshot index).
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01();

    double uniform(double lo, double hi);

    // Standard normal via Box-Muller; values are produced in pairs.
    double normal();

    // Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_normal();

    // Poisson-distributed count with the given mean (>= 0).
    std::uint64_t poisson(double mean);

  private:
    std::uint64_t state_ = 0;
    double cached_normal_ = 0.0;
    bool have_cached_normal_ = false;
};

} // namespace eacal

#endif
