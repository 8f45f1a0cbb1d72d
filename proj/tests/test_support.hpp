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
//
// Shared helpers for unit and acceptance tests: snapshot sets with planted
// scatterers and greedy-state replay.

#ifndef EACAL_TESTS_TEST_SUPPORT_HPP
#define EACAL_TESTS_TEST_SUPPORT_HPP

#include "eacal/estimator.hpp"
#include "eacal/rng.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace test_support
{

struct Planted
{
    eacal::Point2 point;
    double base = 0.0;
};

// Circle-anchor snapshot set with flat-magnitude, random-phase marks drawn
// per (snapshot, scatterer) and a unit LOS gain.
inline eacal::SnapshotSet planted_set(const eacal::PulseSpec &pulse, eacal::Point2 agent, double radius,
                                      std::size_t m_count, const std::vector<Planted> &planted,
                                      double noise_var, std::uint64_t seed,
                                      Eigen::MatrixXcd *marks_out = nullptr)
{
    using namespace eacal;
    constexpr double pi = std::numbers::pi;

    const FrameSpec frame{agent, 0.0};
    const AnchorSet anchors = synthetic_circle_anchors(frame, radius, m_count);

    Rng phase_rng(seed, 101);
    Eigen::MatrixXcd marks(m_count, planted.size());
    for (Eigen::Index m = 0; m < marks.rows(); ++m)
        for (Eigen::Index j = 0; j < marks.cols(); ++j)
            marks(m, j) = std::polar(planted[static_cast<std::size_t>(j)].base, phase_rng.uniform(0.0, 2.0 * pi));

    const NoiseSpec noise{noise_var, derive_seed(seed, 202)};
    SnapshotSet set;
    set.agent = agent;
    set.pulse = pulse;
    std::vector<ScatterContribution> contribs(planted.size());
    for (std::size_t m = 0; m < m_count; ++m)
    {
        for (std::size_t j = 0; j < planted.size(); ++j)
            contribs[j] = {planted[j].point, marks(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j))};
        SignalVector r = synthesize(pulse, agent, anchors.positions[m], 1.0, contribs, noise, m);
        set.snapshots.push_back({std::move(r), anchors.positions[m], anchors.aoas[m]});
    }
    if (marks_out)
        *marks_out = marks;
    return set;
}

// Replays the greedy subtraction sequence of a calibration result. Entry 0
// is the residual state after LOS removal; entry j+1 is the state after
// subtracting extracted point j.
inline std::vector<std::vector<eacal::SignalVector>> replay_states(const eacal::SnapshotSet &set,
                                                                   const eacal::CalibrationResult &result)
{
    using namespace eacal;
    std::vector<std::vector<SignalVector>> states;
    std::vector<SignalVector> res(set.size());
    for (std::size_t m = 0; m < set.size(); ++m)
    {
        const SignalVector s = los_vector(set.pulse, set.agent, set.snapshots[m].anchor);
        res[m] = set.snapshots[m].r - result.alpha_hat[static_cast<Eigen::Index>(m)] * s;
    }
    states.push_back(res);
    for (std::size_t j = 0; j < result.q_hat.size(); ++j)
    {
        for (std::size_t m = 0; m < set.size(); ++m)
        {
            const SignalVector t = scatter_vector(set.pulse, set.agent, result.q_hat[j], set.snapshots[m].anchor);
            res[m] -= result.beta_hat(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) * t;
        }
        states.push_back(res);
    }
    return states;
}

} // namespace test_support

#endif
