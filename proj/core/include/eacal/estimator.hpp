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

#ifndef EACAL_ESTIMATOR_HPP
#define EACAL_ESTIMATOR_HPP

#include "eacal/geometry.hpp"
#include "eacal/waveform.hpp"

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace eacal
{

// One received snapshot: complex baseband samples, the anchor position it
// was recorded from, and the angle of arrival of that anchor.
struct Snapshot
{
    SignalVector r;
    Point2 anchor;
    double aoa = 0.0;
};

// All M snapshots of one campaign, with the known agent position and the
// pulse/sampling parameters they were recorded with.
struct SnapshotSet
{
    std::vector<Snapshot> snapshots;
    Point2 agent;
    PulseSpec pulse;

    std::size_t size() const { return snapshots.size(); }
    void validate() const;
};

// Rectangular candidate grid for scattering-point extraction. Node (ix, iy)
// sits at (x_min + ix * step, y_min + iy * step); both ends inclusive.
struct GridSpec
{
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double step = 0.02;

    static GridSpec centered(Point2 center, double half_extent_m, double step_m);

    std::size_t nx() const;
    std::size_t ny() const;
    Point2 node(std::size_t ix, std::size_t iy) const { return {x_min + static_cast<double>(ix) * step, y_min + static_cast<double>(iy) * step}; }

    void validate() const;
};

// Greedy extraction stops once the best candidate's score no longer exceeds
// score_factor * M * noise_variance, or when max_points are extracted.
struct StoppingRule
{
    double score_factor = 3.0;
    std::size_t max_points = 16;

    void validate() const;
};

struct CalibrateOptions
{
    StoppingRule stopping;

    // Re-solve all amplitudes and marks jointly (per snapshot, linear LS
    // over the LOS plus all extracted templates) after the greedy pass.
    // The greedy estimates themselves are never refined unless this is on;
    // when on, one extra entry is appended to the log-likelihood trace.
    bool joint_refit = false;

    // 0 = one worker per hardware thread. Results are identical for any
    // thread count.
    unsigned n_threads = 0;
};

struct CalibrationResult
{
    std::vector<Point2> q_hat;        // extracted scattering points
    Eigen::VectorXcd alpha_hat;       // per-snapshot LOS amplitudes
    Eigen::MatrixXcd beta_hat;        // M x J marks
    std::vector<double> loglik_trace; // joint log-likelihood after init and each accepted point
    double noise_variance = 0.0;
};

// Least-squares projection coefficient argmin_a ||r - a s||^2 = s^H r / ||s||^2.
std::complex<double> ls_amplitude(const SignalVector &r, const SignalVector &s);

// Same projection applied to a residual and a scatter template.
std::complex<double> ls_mark(const SignalVector &residual, const SignalVector &s);

// r - alpha * s_los - sum_j marks[j] * scatter_templates[j].
SignalVector residual(const SignalVector &r, const SignalVector &s_los, std::complex<double> alpha,
                      std::span<const SignalVector> scatter_templates, const Eigen::VectorXcd &marks);

// Joint log-likelihood of all snapshots under the given parameters, up to
// parameter-independent constants: -(1/sigma_w^2) sum_m ||r_m - alpha_m s -
// S beta_m||^2. Zero means a perfect fit.
double joint_loglik(const SnapshotSet &set, const Eigen::VectorXcd &alpha_hat,
                    std::span<const Point2> q_hat, const Eigen::MatrixXcd &beta_hat,
                    double noise_variance);

// Energy captured by adding candidate q with per-snapshot LS-optimal marks:
// sum_m |s(p,q)^H res_m|^2 / ||s(p,q)||^2. This equals sigma_w^2 times the
// joint log-likelihood gain. Returns nullopt when the candidate's delay
// falls outside the observation window for some anchor.
std::optional<double> score_candidate(Point2 q, std::span<const SignalVector> residuals,
                                      const SnapshotSet &meta);

// Noise floor from imported data: robust (MAD-based) spread of the late
// tail of the per-snapshot residuals after LOS removal. Returns the
// variance per complex sample.
double estimate_noise_variance(const SnapshotSet &set);

// Greedy iterative ML calibration:
//  1. per-snapshot LS LOS amplitudes,
//  2. repeat: grid argmax of score_candidate on the running residuals, LS
//     marks for the winner, subtract, log the joint likelihood,
//  3. stop when the best score no longer clears the stopping threshold
//     (that candidate is discarded) or max_points is reached.
// Candidates nearly collinear with the LOS (total delay within a quarter
// sample of the LOS delay for more than 90% of anchors) are excluded.
CalibrationResult calibrate(const SnapshotSet &set, const GridSpec &grid, const StoppingRule &stopping,
                            double noise_variance);
CalibrationResult calibrate(const SnapshotSet &set, const GridSpec &grid, const CalibrateOptions &options,
                            double noise_variance);

} // namespace eacal

#endif
