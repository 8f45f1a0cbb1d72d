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

#ifndef EACAL_WAVEFORM_HPP
#define EACAL_WAVEFORM_HPP

#include "eacal/geometry.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <span>
#include <utility>

namespace eacal
{

// Band-limited baseband pulse plus carrier and sampling parameters.
// Defaults follow a 3.8-10.2 GHz ultra-wideband sounding band.
struct PulseSpec
{
    double carrier_hz = 6.95e9;     // f_c
    double sample_rate_hz = 12.8e9; // f_s, complex baseband sampling
    std::size_t n_samples = 512;    // N, observation window T = N / f_s
    double bandwidth_hz = 6.4e9;    // two-sided baseband bandwidth
    double rolloff = 0.6;           // root-raised-cosine rolloff in [0, 1]

    double sample_period_s() const { return 1.0 / sample_rate_hz; }
    double window_s() const { return static_cast<double>(n_samples) / sample_rate_hz; }

    // Time-unit of the pulse: an RRC with rolloff b occupies a two-sided
    // band (1 + b) / T_sym, so T_sym = (1 + rolloff) / bandwidth.
    double symbol_time_s() const { return (1.0 + rolloff) / bandwidth_hz; }

    void validate() const;
};

// Complex baseband sample vector of length PulseSpec::n_samples.
using SignalVector = Eigen::VectorXcd;

// Additive complex white Gaussian noise, variance per complex sample.
struct NoiseSpec
{
    double variance = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Root-raised-cosine pulse value at time t: real, even, unit peak at t = 0.
double baseband_pulse(const PulseSpec &spec, double t_s);

// Fills out[k] = baseband_pulse(k * T_s - delay) for k = 0..out.size()-1.
// This is the single evaluation path shared by template construction,
// synthesis and scoring. Throws DataError when delay exceeds the window.
void sample_pulse(const PulseSpec &spec, double delay_s, std::span<double> out);

// Carrier rotation e^{-i 2 pi f_c delay} applied to every sample of a
// delayed pulse.
std::complex<double> carrier_phase(const PulseSpec &spec, double delay_s);

// Pulse delayed by the LOS propagation time with its carrier rotation:
// sample k holds s(k T_s - tau(p)) e^{-i 2 pi f_c tau(p)}.
SignalVector los_vector(const PulseSpec &spec, Point2 p, Point2 a);

// Same for the two-hop scattered path anchor -> q -> agent.
SignalVector scatter_vector(const PulseSpec &spec, Point2 p, Point2 q, Point2 a);

// Shared building block: delayed pulse times carrier rotation.
SignalVector delayed_pulse_vector(const PulseSpec &spec, double delay_s);

// Adds circularly-symmetric complex Gaussian noise, variance per sample,
// stream keyed by (spec.seed, stream_index). Deterministic and independent
// across snapshot indices.
void add_noise(SignalVector &signal, const NoiseSpec &noise, std::uint64_t stream_index);

// One synthetic received snapshot:
//   r = alpha * s(p) + sum_j mark_j * s(p, q_j) + n
struct ScatterContribution
{
    Point2 point;
    std::complex<double> mark;
};

SignalVector synthesize(const PulseSpec &spec, Point2 p, Point2 a, std::complex<double> alpha,
                        std::span<const ScatterContribution> scatterers, const NoiseSpec &noise,
                        std::uint64_t stream_index = 0);

} // namespace eacal

#endif
