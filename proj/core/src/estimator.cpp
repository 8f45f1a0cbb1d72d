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

#include "eacal/estimator.hpp"

#include "eacal/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace eacal
{

namespace
{

// Correlation of a real delayed pulse with a complex residual, plus the
// template energy. The carrier rotation does not change |corr|^2 / norm2,
// so scoring never needs it.
struct PulseCorrelation
{
    std::complex<double> corr;
    double norm2;
};

PulseCorrelation correlate_pulse(std::span<const double> pulse, const SignalVector &res)
{
    std::complex<double> corr{0.0, 0.0};
    double norm2 = 0.0;
    const std::complex<double> *r = res.data();
    for (std::size_t k = 0; k < pulse.size(); ++k)
    {
        corr += pulse[k] * r[k];
        norm2 += pulse[k] * pulse[k];
    }
    return {corr, norm2};
}

// Score of one candidate against the running residuals; delays are assumed
// pre-checked against the window.
double score_from_delays(const PulseSpec &spec, std::span<const double> delays,
                         std::span<const SignalVector> residuals, std::span<double> pulse_buf)
{
    double total = 0.0;
    for (std::size_t m = 0; m < delays.size(); ++m)
    {
        sample_pulse(spec, delays[m], pulse_buf);
        const auto pc = correlate_pulse(pulse_buf, residuals[m]);
        if (pc.norm2 > 0.0)
            total += std::norm(pc.corr) / pc.norm2;
    }
    return total;
}

void run_chunked(std::size_t count, unsigned n_threads, const std::function<void(std::size_t, std::size_t)> &body)
{
    unsigned workers = n_threads == 0 ? std::thread::hardware_concurrency() : n_threads;
    if (workers == 0)
        workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1)
    {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w)
    {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back(body, begin, end);
    }
    for (auto &t : pool)
        t.join();
}

} // namespace

void SnapshotSet::validate() const
{
    pulse.validate();
    agent.validate();
    if (snapshots.empty())
        throw DataError("SnapshotSet: need at least one snapshot");
    for (std::size_t m = 0; m < snapshots.size(); ++m)
    {
        snapshots[m].anchor.validate();
        if (static_cast<std::size_t>(snapshots[m].r.size()) != pulse.n_samples)
            throw DataError("SnapshotSet: snapshot " + std::to_string(m) + " has " +
                            std::to_string(snapshots[m].r.size()) + " samples, expected " +
                            std::to_string(pulse.n_samples));
        if (!std::isfinite(snapshots[m].aoa))
            throw DataError("SnapshotSet: snapshot " + std::to_string(m) + " has a non-finite aoa");
    }
}

GridSpec GridSpec::centered(Point2 center, double half_extent_m, double step_m)
{
    return {center.x - half_extent_m, center.x + half_extent_m,
            center.y - half_extent_m, center.y + half_extent_m, step_m};
}

void GridSpec::validate() const
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw DataError("GridSpec: step must be positive");
    if (!(x_max >= x_min) || !(y_max >= y_min) || !std::isfinite(x_min) || !std::isfinite(y_min) ||
        !std::isfinite(x_max) || !std::isfinite(y_max))
        throw DataError("GridSpec: ranges must be non-empty and finite");
}

std::size_t GridSpec::nx() const
{
    return static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
}

std::size_t GridSpec::ny() const
{
    return static_cast<std::size_t>(std::floor((y_max - y_min) / step + 1e-9)) + 1;
}

void StoppingRule::validate() const
{
    if (!(score_factor >= 0.0) || !std::isfinite(score_factor))
        throw DataError("StoppingRule: score factor must be nonnegative");
}

std::complex<double> ls_amplitude(const SignalVector &r, const SignalVector &s)
{
    if (r.size() != s.size())
        throw DataError("ls_amplitude: vector lengths differ");
    const double norm2 = s.squaredNorm();
    if (!(norm2 > 0.0))
        throw NumericalError("ls_amplitude: template has zero energy");
    return s.dot(r) / norm2; // Eigen's dot conjugates the first factor
}

std::complex<double> ls_mark(const SignalVector &residual, const SignalVector &s)
{
    return ls_amplitude(residual, s);
}

SignalVector residual(const SignalVector &r, const SignalVector &s_los, std::complex<double> alpha,
                      std::span<const SignalVector> scatter_templates, const Eigen::VectorXcd &marks)
{
    if (r.size() != s_los.size())
        throw DataError("residual: vector lengths differ");
    if (static_cast<std::size_t>(marks.size()) != scatter_templates.size())
        throw DataError("residual: one mark per template required");

    SignalVector out = r - alpha * s_los;
    for (std::size_t j = 0; j < scatter_templates.size(); ++j)
    {
        if (scatter_templates[j].size() != r.size())
            throw DataError("residual: template " + std::to_string(j) + " length differs");
        out -= marks[static_cast<Eigen::Index>(j)] * scatter_templates[j];
    }
    return out;
}

double joint_loglik(const SnapshotSet &set, const Eigen::VectorXcd &alpha_hat,
                    std::span<const Point2> q_hat, const Eigen::MatrixXcd &beta_hat,
                    double noise_variance)
{
    set.validate();
    if (!(noise_variance > 0.0))
        throw NumericalError("joint_loglik: noise variance must be positive");
    const auto m_count = static_cast<Eigen::Index>(set.size());
    const auto j_count = static_cast<Eigen::Index>(q_hat.size());
    if (alpha_hat.size() != m_count)
        throw DataError("joint_loglik: need one LOS amplitude per snapshot");
    if (j_count > 0 && (beta_hat.rows() != m_count || beta_hat.cols() != j_count))
        throw DataError("joint_loglik: beta matrix must be M x J");

    double total = 0.0;
    for (Eigen::Index m = 0; m < m_count; ++m)
    {
        const auto &snap = set.snapshots[static_cast<std::size_t>(m)];
        SignalVector res = snap.r - alpha_hat[m] * los_vector(set.pulse, set.agent, snap.anchor);
        for (Eigen::Index j = 0; j < j_count; ++j)
            res -= beta_hat(m, j) * scatter_vector(set.pulse, set.agent, q_hat[static_cast<std::size_t>(j)], snap.anchor);
        total += res.squaredNorm();
    }
    return -total / noise_variance;
}

std::optional<double> score_candidate(Point2 q, std::span<const SignalVector> residuals,
                                      const SnapshotSet &meta)
{
    if (residuals.size() != meta.size())
        throw DataError("score_candidate: one residual per snapshot required");
    const double window = meta.pulse.window_s();
    std::vector<double> delays(meta.size());
    for (std::size_t m = 0; m < meta.size(); ++m)
    {
        delays[m] = scatter_delay(meta.snapshots[m].anchor, q, meta.agent);
        if (delays[m] > window)
            return std::nullopt;
    }
    std::vector<double> buf(meta.pulse.n_samples);
    return score_from_delays(meta.pulse, delays, residuals, buf);
}

double estimate_noise_variance(const SnapshotSet &set)
{
    set.validate();
    const std::size_t n = set.pulse.n_samples;
    const std::size_t tail_begin = n - n / 4;

    std::vector<double> comps;
    comps.reserve(set.size() * (n - tail_begin) * 2);
    for (const auto &snap : set.snapshots)
    {
        const SignalVector s = los_vector(set.pulse, set.agent, snap.anchor);
        const SignalVector res = snap.r - ls_amplitude(snap.r, s) * s;
        for (std::size_t k = tail_begin; k < n; ++k)
        {
            comps.push_back(res[static_cast<Eigen::Index>(k)].real());
            comps.push_back(res[static_cast<Eigen::Index>(k)].imag());
        }
    }
    if (comps.empty())
        throw NumericalError("estimate_noise_variance: empty residual tail");

    auto median_of = [](std::vector<double> &v) {
        const std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
        return v[mid];
    };
    const double med = median_of(comps);
    for (double &c : comps)
        c = std::abs(c - med);
    const double mad = median_of(comps);

    const double sigma_component = 1.4826 * mad; // Gaussian-consistent scale
    return 2.0 * sigma_component * sigma_component;
}

CalibrationResult calibrate(const SnapshotSet &set, const GridSpec &grid, const StoppingRule &stopping,
                            double noise_variance)
{
    CalibrateOptions options;
    options.stopping = stopping;
    return calibrate(set, grid, options, noise_variance);
}

CalibrationResult calibrate(const SnapshotSet &set, const GridSpec &grid, const CalibrateOptions &options,
                            double noise_variance)
{
    set.validate();
    grid.validate();
    options.stopping.validate();
    if (!(noise_variance > 0.0))
        throw NumericalError("calibrate: noise variance must be positive");

    const std::size_t m_count = set.size();
    const std::size_t n = set.pulse.n_samples;
    const double window = set.pulse.window_s();
    const double quarter_sample_s = 0.25 * set.pulse.sample_period_s();

    // LOS templates and LS amplitude initialization.
    std::vector<SignalVector> los_templates(m_count);
    std::vector<double> los_delays(m_count);
    Eigen::VectorXcd alpha(static_cast<Eigen::Index>(m_count));
    std::vector<SignalVector> res(m_count);
    for (std::size_t m = 0; m < m_count; ++m)
    {
        los_delays[m] = los_delay(set.agent, set.snapshots[m].anchor);
        los_templates[m] = los_vector(set.pulse, set.agent, set.snapshots[m].anchor);
        alpha[static_cast<Eigen::Index>(m)] = ls_amplitude(set.snapshots[m].r, los_templates[m]);
        res[m] = set.snapshots[m].r - alpha[static_cast<Eigen::Index>(m)] * los_templates[m];
    }

    auto residual_loglik = [&]() {
        double total = 0.0;
        for (const auto &v : res)
            total += v.squaredNorm();
        return -total / noise_variance;
    };

    CalibrationResult result;
    result.noise_variance = noise_variance;
    result.alpha_hat = alpha;
    result.loglik_trace.push_back(residual_loglik());

    // Candidate set: grid nodes whose two-hop delay stays inside the window
    // for every anchor and which are not delay-collinear with the LOS.
    const std::size_t nx = grid.nx(), ny = grid.ny();
    const std::size_t n_candidates = nx * ny;
    std::vector<std::uint8_t> usable(n_candidates, 0);
    std::vector<Point2> nodes(n_candidates);
    run_chunked(n_candidates, options.n_threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c)
        {
            const Point2 q = grid.node(c % nx, c / nx);
            nodes[c] = q;
            bool in_window = true;
            std::size_t collinear = 0;
            for (std::size_t m = 0; m < m_count; ++m)
            {
                const double tau = scatter_delay(set.snapshots[m].anchor, q, set.agent);
                if (tau > window)
                {
                    in_window = false;
                    break;
                }
                if (tau - los_delays[m] < quarter_sample_s)
                    ++collinear;
            }
            const bool collinear_with_los =
                static_cast<double>(collinear) > 0.9 * static_cast<double>(m_count);
            usable[c] = (in_window && !collinear_with_los) ? 1 : 0;
        }
    });

    const double threshold =
        options.stopping.score_factor * static_cast<double>(m_count) * noise_variance;
    std::vector<double> scores(n_candidates);
    std::vector<Eigen::MatrixXcd::Scalar> beta_cols; // flattened M-major columns
    std::vector<double> delays_buf(m_count);
    std::vector<double> pulse_buf(n);

    while (result.q_hat.size() < options.stopping.max_points)
    {
        run_chunked(n_candidates, options.n_threads, [&](std::size_t begin, std::size_t end) {
            std::vector<double> delays(m_count);
            std::vector<double> pulse(n);
            for (std::size_t c = begin; c < end; ++c)
            {
                if (!usable[c])
                {
                    scores[c] = -std::numeric_limits<double>::infinity();
                    continue;
                }
                for (std::size_t m = 0; m < m_count; ++m)
                    delays[m] = scatter_delay(set.snapshots[m].anchor, nodes[c], set.agent);
                scores[c] = score_from_delays(set.pulse, delays, res, pulse);
            }
        });

        // Deterministic argmax: scan order is y-major then x, so equal
        // scores resolve to the lowest y, then lowest x.
        std::size_t best = n_candidates;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n_candidates; ++c)
        {
            if (scores[c] > best_score)
            {
                best_score = scores[c];
                best = c;
            }
        }
        if (best == n_candidates || !(best_score > threshold))
            break;

        // Accept: LS marks against the winner's templates, subtract, log.
        const Point2 q = nodes[best];
        for (std::size_t m = 0; m < m_count; ++m)
            delays_buf[m] = scatter_delay(set.snapshots[m].anchor, q, set.agent);
        for (std::size_t m = 0; m < m_count; ++m)
        {
            sample_pulse(set.pulse, delays_buf[m], pulse_buf);
            const auto pc = correlate_pulse(pulse_buf, res[m]);
            const std::complex<double> rot = carrier_phase(set.pulse, delays_buf[m]);
            const std::complex<double> mark = std::conj(rot) * pc.corr / pc.norm2;
            beta_cols.push_back(mark);
            const std::complex<double> scaled = mark * rot;
            auto *rm = res[m].data();
            for (std::size_t k = 0; k < n; ++k)
                rm[k] -= scaled * pulse_buf[k];
        }
        result.q_hat.push_back(q);
        result.loglik_trace.push_back(residual_loglik());
    }

    const auto j_count = static_cast<Eigen::Index>(result.q_hat.size());
    result.beta_hat.resize(static_cast<Eigen::Index>(m_count), j_count);
    for (Eigen::Index j = 0; j < j_count; ++j)
        for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(m_count); ++m)
            result.beta_hat(m, j) = beta_cols[static_cast<std::size_t>(j) * m_count + static_cast<std::size_t>(m)];

    if (options.joint_refit && j_count > 0)
    {
        for (std::size_t m = 0; m < m_count; ++m)
        {
            Eigen::MatrixXcd basis(static_cast<Eigen::Index>(n), j_count + 1);
            basis.col(0) = los_templates[m];
            for (Eigen::Index j = 0; j < j_count; ++j)
                basis.col(j + 1) =
                    scatter_vector(set.pulse, set.agent, result.q_hat[static_cast<std::size_t>(j)], set.snapshots[m].anchor);
            const Eigen::VectorXcd sol = basis.colPivHouseholderQr().solve(set.snapshots[m].r);
            result.alpha_hat[static_cast<Eigen::Index>(m)] = sol[0];
            result.beta_hat.row(static_cast<Eigen::Index>(m)) = sol.tail(j_count).transpose();
            res[m] = set.snapshots[m].r - basis * sol;
        }
        result.loglik_trace.push_back(residual_loglik());
    }

    return result;
}

} // namespace eacal
