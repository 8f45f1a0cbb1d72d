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

#include "eacal/errors.hpp"
#include "eacal/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace eacal
{

namespace
{

constexpr double pi = std::numbers::pi;

// Direct evaluation switches on below this distance (in normalized time)
// from a removable singularity of the RRC closed form; inside the inner
// window the truncated series is used instead, which avoids the 0/0
// cancellation entirely.
constexpr double singular_guard = 1e-4;
constexpr double singular_series = 1e-7;

// Unnormalized RRC peak: lim_{u->0} of the closed form below.
double rrc_peak_raw(double rolloff)
{
    return (1.0 - rolloff) + 4.0 * rolloff / pi;
}

// Closed-form root-raised-cosine in normalized time u = t / T_sym,
//
//   raw(u) = [ sin(pi u (1-b)) + 4 b u cos(pi u (1+b)) ] /
//            [ pi u (1 - (4 b u)^2) ]
//
// even in u, with removable singularities at u = 0 and |u| = 1/(4b). Near
// the latter both numerator and denominator vanish; a second-order rational
// expansion around the singular point keeps full precision there.
double rrc_raw(double u, double rolloff)
{
    const double b = rolloff;
    u = std::abs(u);
    if (u < 1e-15)
        return rrc_peak_raw(b);

    if (b > 0.0)
    {
        const double u0 = 1.0 / (4.0 * b);
        const double d = u - u0;
        if (std::abs(d) < singular_series)
        {
            const double theta = pi * (1.0 - b) * u0;
            const double sin_t = std::sin(theta), cos_t = std::cos(theta);
            const double num1 = -2.0 * pi * b * cos_t - 4.0 * b * sin_t;
            const double num2 = 4.0 * b * pi * (pi * sin_t - 2.0 * (1.0 + b) * cos_t);
            const double den1 = -2.0 * pi;
            const double den2 = -24.0 * pi * b;
            return (num1 + 0.5 * num2 * d) / (den1 + 0.5 * den2 * d);
        }
    }

    const double num = std::sin(pi * u * (1.0 - b)) + 4.0 * b * u * std::cos(pi * u * (1.0 + b));
    const double den = pi * u * (1.0 - 16.0 * b * b * u * u);
    return num / den;
}

bool near_singularity(double u, double rolloff)
{
    u = std::abs(u);
    if (u < singular_guard)
        return true;
    return rolloff > 0.0 && std::abs(u - 1.0 / (4.0 * rolloff)) < singular_guard;
}

} // namespace

void PulseSpec::validate() const
{
    if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
        throw DataError("PulseSpec: carrier frequency must be positive");
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
        throw DataError("PulseSpec: bandwidth must be positive");
    if (!(sample_rate_hz >= bandwidth_hz) || !std::isfinite(sample_rate_hz))
        throw DataError("PulseSpec: sample rate must cover the two-sided bandwidth");
    if (n_samples < 1)
        throw DataError("PulseSpec: need at least one sample");
    if (!(rolloff >= 0.0 && rolloff <= 1.0))
        throw DataError("PulseSpec: rolloff must lie in [0, 1]");
}

void NoiseSpec::validate() const
{
    if (!(variance >= 0.0) || !std::isfinite(variance))
        throw DataError("NoiseSpec: variance must be nonnegative");
}

double baseband_pulse(const PulseSpec &spec, double t_s)
{
    const double u = t_s / spec.symbol_time_s();
    return rrc_raw(u, spec.rolloff) / rrc_peak_raw(spec.rolloff);
}

void sample_pulse(const PulseSpec &spec, double delay_s, std::span<double> out)
{
    if (delay_s > spec.window_s())
        throw DataError("sample_pulse: delay " + std::to_string(delay_s) +
                        " s exceeds the observation window " + std::to_string(spec.window_s()) + " s");

    const std::size_t n = out.size();
    const double b = spec.rolloff;
    const double t_sym = spec.symbol_time_s();
    const double u_begin = -delay_s / t_sym;
    const double du = spec.sample_period_s() / t_sym;
    const double inv_peak = 1.0 / rrc_peak_raw(b);
    const double four_b = 4.0 * b;
    const double c2 = 16.0 * b * b;

    // Phase recurrences for sin(pi u (1-b)) and cos(pi u (1+b)): the angles
    // advance by a fixed step per sample, so one sincos pair per angle
    // replaces two transcendental calls per sample. Accumulated rotation
    // error stays near N * eps, well below the fallback guard band.
    double sa = std::sin(pi * (1.0 - b) * u_begin);
    double ca = std::cos(pi * (1.0 - b) * u_begin);
    double sb = std::sin(pi * (1.0 + b) * u_begin);
    double cb = std::cos(pi * (1.0 + b) * u_begin);
    const double da = pi * (1.0 - b) * du;
    const double db = pi * (1.0 + b) * du;
    const double sin_da = std::sin(da), cos_da = std::cos(da);
    const double sin_db = std::sin(db), cos_db = std::cos(db);

    for (std::size_t k = 0; k < n; ++k)
    {
        const double u = u_begin + static_cast<double>(k) * du;
        if (near_singularity(u, b))
        {
            out[k] = rrc_raw(u, b) * inv_peak;
        }
        else
        {
            const double num = sa + four_b * u * cb;
            const double den = pi * u * (1.0 - c2 * u * u);
            out[k] = num / den * inv_peak;
        }
        const double sa_next = sa * cos_da + ca * sin_da;
        const double ca_next = ca * cos_da - sa * sin_da;
        const double sb_next = sb * cos_db + cb * sin_db;
        const double cb_next = cb * cos_db - sb * sin_db;
        sa = sa_next;
        ca = ca_next;
        sb = sb_next;
        cb = cb_next;
    }
}

std::complex<double> carrier_phase(const PulseSpec &spec, double delay_s)
{
    return std::polar(1.0, -2.0 * pi * spec.carrier_hz * delay_s);
}

SignalVector delayed_pulse_vector(const PulseSpec &spec, double delay_s)
{
    spec.validate();
    std::vector<double> buf(spec.n_samples);
    sample_pulse(spec, delay_s, buf);
    const std::complex<double> rot = carrier_phase(spec, delay_s);

    SignalVector v(static_cast<Eigen::Index>(spec.n_samples));
    for (std::size_t k = 0; k < spec.n_samples; ++k)
        v[static_cast<Eigen::Index>(k)] = buf[k] * rot;
    return v;
}

SignalVector los_vector(const PulseSpec &spec, Point2 p, Point2 a)
{
    return delayed_pulse_vector(spec, los_delay(p, a));
}

SignalVector scatter_vector(const PulseSpec &spec, Point2 p, Point2 q, Point2 a)
{
    return delayed_pulse_vector(spec, scatter_delay(a, q, p));
}

void add_noise(SignalVector &signal, const NoiseSpec &noise, std::uint64_t stream_index)
{
    noise.validate();
    if (noise.variance == 0.0)
        return;
    Rng rng(noise.seed, stream_index);
    const double scale = std::sqrt(noise.variance);
    for (Eigen::Index k = 0; k < signal.size(); ++k)
        signal[k] += scale * rng.complex_normal();
}

SignalVector synthesize(const PulseSpec &spec, Point2 p, Point2 a, std::complex<double> alpha,
                        std::span<const ScatterContribution> scatterers, const NoiseSpec &noise,
                        std::uint64_t stream_index)
{
    spec.validate();
    SignalVector r = los_vector(spec, p, a);
    r *= alpha;
    for (const auto &sc : scatterers)
        r += sc.mark * scatter_vector(spec, p, sc.point, a);
    add_noise(r, noise, stream_index);
    return r;
}

} // namespace eacal
