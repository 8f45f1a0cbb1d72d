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
#include "eacal/rng.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace eacal;
using test_support::planted_set;
using test_support::replay_states;

namespace
{

constexpr double pi = std::numbers::pi;

PulseSpec small_pulse(std::size_t n = 256)
{
    PulseSpec spec;
    spec.n_samples = n;
    return spec;
}

} // namespace

TEST_CASE("ls_amplitude recovers exact projections")
{
    const PulseSpec spec = small_pulse(128);
    const SignalVector s = los_vector(spec, {0, 0}, {0.9, 0.2});

    SUBCASE("pure scaled template")
    {
        const std::complex<double> truth = 2.0 * std::polar(1.0, pi / 4);
        const SignalVector r = truth * s;
        CHECK(std::abs(ls_amplitude(r, s) - truth) < 1e-12);
    }

    SUBCASE("orthogonal input maps to zero")
    {
        Rng rng(3);
        SignalVector w(s.size());
        for (Eigen::Index k = 0; k < w.size(); ++k)
            w[k] = rng.complex_normal();
        w -= ls_amplitude(w, s) * s; // Gram-Schmidt
        CHECK(std::abs(ls_amplitude(w, s)) < 1e-12 * w.norm() / s.norm());
    }

    SUBCASE("zero template raises")
    {
        const SignalVector zero = SignalVector::Zero(s.size());
        CHECK_THROWS_AS(ls_amplitude(s, zero), NumericalError);
        CHECK_THROWS_AS(ls_amplitude(zero, SignalVector::Zero(4)), DataError); // length mismatch
    }

    SUBCASE("matches the brute-force complex-plane minimizer")
    {
        Rng rng(4);
        SignalVector r = std::complex<double>{-0.7, 1.3} * s;
        for (Eigen::Index k = 0; k < r.size(); ++k)
            r[k] += 0.05 * rng.complex_normal();
        const std::complex<double> fast = ls_amplitude(r, s);
        const std::complex<double> brute = oracles::grid_ls(r, s);
        CHECK(std::abs(fast - brute) <= 1e-6 * std::abs(fast));
    }
}

TEST_CASE("ls_mark recovers marks under orthogonal contamination")
{
    const PulseSpec spec = small_pulse(128);
    const SignalVector t = scatter_vector(spec, {0, 0}, {0.2, 0.1}, {0.9, 0.2});
    const std::complex<double> beta{0.3, -1.1};

    SUBCASE("pure template")
    {
        CHECK(std::abs(ls_mark(beta * t, t) - beta) < 1e-12);
    }

    SUBCASE("orthogonal residual maps to zero")
    {
        Rng rng(5);
        SignalVector w(t.size());
        for (Eigen::Index k = 0; k < w.size(); ++k)
            w[k] = rng.complex_normal();
        w -= ls_mark(w, t) * t;
        CHECK(std::abs(ls_mark(w, t)) < 1e-12 * w.norm() / t.norm());
    }

    SUBCASE("template plus explicitly orthogonalized component")
    {
        Rng rng(6);
        SignalVector w(t.size());
        for (Eigen::Index k = 0; k < w.size(); ++k)
            w[k] = rng.complex_normal();
        w -= ls_mark(w, t) * t; // now w is orthogonal to t
        const SignalVector r = beta * t + w;
        CHECK(std::abs(ls_mark(r, t) - beta) < 1e-9);
    }
}

TEST_CASE("residual subtracts the linear model exactly")
{
    const PulseSpec spec = small_pulse(128);
    const Point2 p{0, 0}, a{1.0, 0.1}, q{0.25, -0.1};
    const SignalVector s = los_vector(spec, p, a);
    const SignalVector t = scatter_vector(spec, p, q, a);
    const std::complex<double> alpha{1.2, 0.4}, beta{-0.3, 0.8};

    SUBCASE("LOS-only model fits itself")
    {
        const SignalVector r = alpha * s;
        const SignalVector res = residual(r, s, alpha, {}, Eigen::VectorXcd{});
        CHECK(res.norm() < 1e-15 * r.norm());
    }

    SUBCASE("full noise-free model leaves nothing")
    {
        const std::vector<ScatterContribution> scat{{q, beta}};
        const SignalVector r = synthesize(spec, p, a, alpha, scat, NoiseSpec{0.0, 0});
        const std::vector<SignalVector> templates{t};
        Eigen::VectorXcd marks(1);
        marks << beta;
        const SignalVector res = residual(r, s, alpha, templates, marks);
        CHECK(res.norm() < 1e-9 * r.norm());
    }

    SUBCASE("subtracting only the LOS leaves the scatter term")
    {
        const std::vector<ScatterContribution> scat{{q, beta}};
        const SignalVector r = synthesize(spec, p, a, alpha, scat, NoiseSpec{0.0, 0});
        const SignalVector res = residual(r, s, alpha, {}, Eigen::VectorXcd{});
        CHECK((res - beta * t).norm() < 1e-9 * t.norm());
    }

    SUBCASE("dimension mismatches raise")
    {
        Eigen::VectorXcd marks(1);
        marks << beta;
        CHECK_THROWS_AS(residual(s, s, alpha, {}, marks), DataError);
    }
}

TEST_CASE("joint_loglik forms and separability")
{
    const PulseSpec spec = small_pulse(128);
    const SnapshotSet set = planted_set(spec, {0, 0}, 1.2, 4, {{{0.2, 0.1}, 0.4}}, 0.0, 9);
    const double variance = 0.01;

    SUBCASE("all-zero estimates give the raw energy")
    {
        double energy = 0.0;
        for (const auto &snap : set.snapshots)
            energy += snap.r.squaredNorm();
        const Eigen::VectorXcd alpha = Eigen::VectorXcd::Zero(4);
        const double ll = joint_loglik(set, alpha, {}, Eigen::MatrixXcd{}, variance);
        CHECK(ll == doctest::Approx(-energy / variance).epsilon(1e-12));
    }

    SUBCASE("the true parameters fit perfectly")
    {
        Eigen::MatrixXcd marks;
        const SnapshotSet clean = planted_set(spec, {0, 0}, 1.2, 4, {{{0.2, 0.1}, 0.4}}, 0.0, 9, &marks);
        const Eigen::VectorXcd alpha = Eigen::VectorXcd::Ones(4);
        const std::vector<Point2> q{{0.2, 0.1}};
        const double ll = joint_loglik(clean, alpha, q, marks, variance);
        CHECK(std::abs(ll) < 1e-12 * clean.snapshots[0].r.squaredNorm() / variance);
    }

    SUBCASE("sums over per-snapshot terms")
    {
        const Eigen::VectorXcd alpha = Eigen::VectorXcd::Constant(4, std::complex<double>{0.5, 0.2});
        const double whole = joint_loglik(set, alpha, {}, Eigen::MatrixXcd{}, variance);
        double parts = 0.0;
        for (std::size_t m = 0; m < set.size(); ++m)
        {
            SnapshotSet single;
            single.agent = set.agent;
            single.pulse = set.pulse;
            single.snapshots.push_back(set.snapshots[m]);
            Eigen::VectorXcd a1(1);
            a1 << alpha[static_cast<Eigen::Index>(m)];
            parts += joint_loglik(single, a1, {}, Eigen::MatrixXcd{}, variance);
        }
        CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
    }

    SUBCASE("nonpositive variance raises")
    {
        const Eigen::VectorXcd alpha = Eigen::VectorXcd::Zero(4);
        CHECK_THROWS_AS(joint_loglik(set, alpha, {}, Eigen::MatrixXcd{}, 0.0), NumericalError);
        CHECK_THROWS_AS(joint_loglik(set, alpha, {}, Eigen::MatrixXcd{}, -1.0), NumericalError);
    }
}

TEST_CASE("score_candidate against an exhaustive grid")
{
    const PulseSpec spec = small_pulse(192);
    const Point2 agent{0, 0};
    const GridSpec grid = GridSpec::centered(agent, 0.4, 0.05);
    const Point2 q0 = grid.node(4, 11); // an exact node

    Eigen::MatrixXcd marks;
    const SnapshotSet set = planted_set(spec, agent, 1.2, 8, {{q0, 0.5}}, 0.0, 10, &marks);

    // residuals = exactly the scatter component
    std::vector<SignalVector> residuals;
    double expected_score = 0.0;
    for (std::size_t m = 0; m < set.size(); ++m)
    {
        const SignalVector t = scatter_vector(spec, agent, q0, set.snapshots[m].anchor);
        residuals.push_back(marks(static_cast<Eigen::Index>(m), 0) * t);
        expected_score += std::norm(marks(static_cast<Eigen::Index>(m), 0)) * t.squaredNorm();
    }

    SUBCASE("zero residuals score zero")
    {
        std::vector<SignalVector> zeros(set.size(), SignalVector::Zero(static_cast<Eigen::Index>(spec.n_samples)));
        const auto score = score_candidate(q0, zeros, set);
        REQUIRE(score.has_value());
        CHECK(*score == 0.0);
    }

    SUBCASE("the planted node maximizes the score")
    {
        const auto at_q0 = score_candidate(q0, residuals, set);
        REQUIRE(at_q0.has_value());
        CHECK(*at_q0 == doctest::Approx(expected_score).epsilon(1e-9));

        for (std::size_t iy = 0; iy < grid.ny(); ++iy)
            for (std::size_t ix = 0; ix < grid.nx(); ++ix)
            {
                const Point2 q = grid.node(ix, iy);
                if (q == q0)
                    continue;
                const auto s = score_candidate(q, residuals, set);
                REQUIRE(s.has_value());
                CHECK(*s < *at_q0);
            }
    }

    SUBCASE("score ignores a global phase rotation")
    {
        const std::complex<double> rot = std::polar(1.0, 1.234);
        std::vector<SignalVector> rotated;
        for (const auto &r : residuals)
            rotated.push_back(rot * r);
        const auto s0 = score_candidate(q0, residuals, set);
        const auto s1 = score_candidate(q0, rotated, set);
        CHECK(*s1 == doctest::Approx(*s0).epsilon(1e-12));
    }

    SUBCASE("out-of-window candidates are signalled")
    {
        const double reach = 0.5 * spec.window_s() * speed_of_light;
        const auto s = score_candidate({reach, reach}, residuals, set);
        CHECK_FALSE(s.has_value());
    }
}

TEST_CASE("estimate_noise_variance tracks the injected floor")
{
    const PulseSpec spec = small_pulse(256);
    const double variance = 4e-3;
    const SnapshotSet set = planted_set(spec, {0, 0}, 1.0, 24, {{{0.15, 0.05}, 0.3}}, variance, 11);
    const double est = estimate_noise_variance(set);
    CHECK(est == doctest::Approx(variance).epsilon(0.15));
}

TEST_CASE("calibrate: noise-free LOS-only campaign stays empty")
{
    const PulseSpec spec = small_pulse(128);
    const SnapshotSet set = planted_set(spec, {0, 0}, 1.0, 8, {}, 0.0, 12);
    const GridSpec grid = GridSpec::centered({0, 0}, 0.4, 0.05);

    const CalibrationResult result = calibrate(set, grid, StoppingRule{}, 1e-8);
    CHECK(result.q_hat.empty());
    REQUIRE(result.loglik_trace.size() == 1);
    CHECK(std::abs(result.loglik_trace[0]) < 1e-6);
    for (Eigen::Index m = 0; m < result.alpha_hat.size(); ++m)
        CHECK(std::abs(result.alpha_hat[m] - std::complex<double>{1.0, 0.0}) < 1e-9);
}

TEST_CASE("calibrate: noise-free on-node scatterer is recovered exactly")
{
    const PulseSpec spec = small_pulse(192);
    const Point2 agent{0, 0};
    const GridSpec grid = GridSpec::centered(agent, 0.7, 0.05);
    // plant outside the anchor ring: the scattered path then stays well
    // separated from the LOS delay for every anchor, so the marks are
    // identifiable per snapshot
    const Point2 q0 = grid.node(23, 23);

    Eigen::MatrixXcd marks;
    const SnapshotSet set = planted_set(spec, agent, 0.25, 32, {{q0, 0.5}}, 0.0, 13, &marks);
    const CalibrationResult result = calibrate(set, grid, StoppingRule{}, 1e-8);

    REQUIRE(result.q_hat.size() == 1);
    CHECK(result.q_hat[0].x == q0.x); // bit-exact: the winning node is the planted node
    CHECK(result.q_hat[0].y == q0.y);
    for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(set.size()); ++m)
        CHECK(std::abs(result.beta_hat(m, 0) - marks(m, 0)) < 1e-6 * std::abs(marks(m, 0)));

    // initial LS residual is orthogonal to the LOS template
    const auto states = replay_states(set, result);
    for (std::size_t m = 0; m < set.size(); ++m)
    {
        const SignalVector s = los_vector(spec, agent, set.snapshots[m].anchor);
        CHECK(std::abs(s.dot(states[0][m])) < 1e-9 * s.norm() * set.snapshots[m].r.norm());
    }
}

TEST_CASE("calibrate: greedy likelihood accounting")
{
    const PulseSpec spec = small_pulse(192);
    const Point2 agent{0, 0};
    const GridSpec grid = GridSpec::centered(agent, 0.3, 0.06);
    const double snr_db = 20.0;
    const double variance = std::pow(10.0, -snr_db / 10.0);

    for (std::uint64_t seed : {21u, 22u})
    {
        const SnapshotSet set = planted_set(spec, agent, 1.1, 16,
                                            {{{0.12, 0.06}, 0.5}, {{-0.18, 0.12}, 0.35}}, variance, seed);
        StoppingRule stop;
        stop.max_points = 6;
        const CalibrationResult result = calibrate(set, grid, stop, variance);
        REQUIRE(result.q_hat.size() >= 1);

        const auto states = replay_states(set, result);
        for (std::size_t j = 0; j + 1 < result.loglik_trace.size(); ++j)
        {
            // strict increase, by exactly the accepted candidate's score
            CHECK(result.loglik_trace[j + 1] > result.loglik_trace[j]);
            const auto score = score_candidate(result.q_hat[j], states[j], set);
            REQUIRE(score.has_value());
            const double gain = (result.loglik_trace[j + 1] - result.loglik_trace[j]) * variance;
            CHECK(gain == doctest::Approx(*score).epsilon(1e-9));

            // accepted candidates clear the stopping threshold
            CHECK(*score > stop.score_factor * static_cast<double>(set.size()) * variance);

            // idempotent re-fit: the post-subtraction residual projects to zero
            for (std::size_t m = 0; m < set.size(); ++m)
            {
                const SignalVector t =
                    scatter_vector(spec, agent, result.q_hat[j], set.snapshots[m].anchor);
                CHECK(std::abs(ls_mark(states[j + 1][m], t)) < 1e-12);
            }
        }
    }
}

TEST_CASE("calibrate: translation equivariance is bit-level on exact inputs")
{
    PulseSpec spec = small_pulse(128);
    const Point2 agent{0.25, -0.5};
    const Point2 offset{0.125, 0.25};

    // anchors quantized to 2^-20 m so that adding the offset stays exact
    const auto quantize = [](double v) { return std::round(v * 1048576.0) / 1048576.0; };
    const std::size_t m_count = 12;
    std::vector<Point2> anchors(m_count);
    for (std::size_t m = 0; m < m_count; ++m)
    {
        const double angle = 2.0 * pi * static_cast<double>(m) / static_cast<double>(m_count);
        anchors[m] = {quantize(agent.x + 1.25 * std::cos(angle)), quantize(agent.y + 1.25 * std::sin(angle))};
    }
    const Point2 q0{agent.x + 0.15625, agent.y + 0.09375}; // dyadic offsets

    Rng phase_rng(77);
    std::vector<std::complex<double>> marks(m_count);
    for (auto &mk : marks)
        mk = std::polar(0.4, phase_rng.uniform(0.0, 2.0 * pi));

    const auto build = [&](Point2 shift) {
        SnapshotSet set;
        set.agent = agent + shift;
        set.pulse = spec;
        const NoiseSpec noise{1e-4, 42};
        for (std::size_t m = 0; m < m_count; ++m)
        {
            const std::vector<ScatterContribution> scat{{q0 + shift, marks[m]}};
            SignalVector r = synthesize(spec, agent + shift, anchors[m] + shift, 1.0, scat, noise, m);
            set.snapshots.push_back({std::move(r), anchors[m] + shift, 0.0});
        }
        return set;
    };

    const GridSpec grid{agent.x - 0.25, agent.x + 0.25, agent.y - 0.25, agent.y + 0.25, 0.03125};
    const GridSpec grid_shifted{grid.x_min + offset.x, grid.x_max + offset.x, grid.y_min + offset.y,
                                grid.y_max + offset.y, grid.step};

    const CalibrationResult base = calibrate(build({0, 0}), grid, StoppingRule{3.0, 4}, 1e-4);
    const CalibrationResult moved = calibrate(build(offset), grid_shifted, StoppingRule{3.0, 4}, 1e-4);

    REQUIRE(base.q_hat.size() == moved.q_hat.size());
    REQUIRE(!base.q_hat.empty());
    for (std::size_t j = 0; j < base.q_hat.size(); ++j)
    {
        CHECK(moved.q_hat[j].x == base.q_hat[j].x + offset.x);
        CHECK(moved.q_hat[j].y == base.q_hat[j].y + offset.y);
    }
    CHECK((moved.alpha_hat - base.alpha_hat).norm() == 0.0);
    CHECK((moved.beta_hat - base.beta_hat).norm() == 0.0);
    REQUIRE(base.loglik_trace.size() == moved.loglik_trace.size());
    for (std::size_t i = 0; i < base.loglik_trace.size(); ++i)
        CHECK(base.loglik_trace[i] == moved.loglik_trace[i]);
}

TEST_CASE("calibrate: joint refit only improves the fit")
{
    const PulseSpec spec = small_pulse(192);
    const Point2 agent{0, 0};
    const GridSpec grid = GridSpec::centered(agent, 0.3, 0.06);
    const double variance = 1e-2;
    // off-node plant so the greedy leaves some mismatch for the refit
    const SnapshotSet set = planted_set(spec, agent, 1.1, 16, {{{0.127, 0.063}, 0.5}}, variance, 23);

    CalibrateOptions plain;
    plain.stopping.max_points = 4;
    CalibrateOptions refit = plain;
    refit.joint_refit = true;

    const CalibrationResult base = calibrate(set, grid, plain, variance);
    const CalibrationResult refined = calibrate(set, grid, refit, variance);

    REQUIRE(refined.loglik_trace.size() == base.loglik_trace.size() + 1);
    CHECK(refined.loglik_trace.back() >= base.loglik_trace.back() - 1e-9);
    // same extracted support
    REQUIRE(refined.q_hat.size() == base.q_hat.size());
    for (std::size_t j = 0; j < base.q_hat.size(); ++j)
        CHECK(refined.q_hat[j] == base.q_hat[j]);
}

TEST_CASE("calibrate: thread count does not change the result")
{
    const PulseSpec spec = small_pulse(128);
    const Point2 agent{0, 0};
    const GridSpec grid = GridSpec::centered(agent, 0.2, 0.05);
    const SnapshotSet set = planted_set(spec, agent, 1.0, 8, {{{0.1, -0.05}, 0.4}}, 1e-3, 31);

    CalibrateOptions serial;
    serial.n_threads = 1;
    CalibrateOptions parallel;
    parallel.n_threads = 4;

    const CalibrationResult a = calibrate(set, grid, serial, 1e-3);
    const CalibrationResult b = calibrate(set, grid, parallel, 1e-3);
    REQUIRE(a.q_hat.size() == b.q_hat.size());
    for (std::size_t j = 0; j < a.q_hat.size(); ++j)
        CHECK(a.q_hat[j] == b.q_hat[j]);
    CHECK((a.alpha_hat - b.alpha_hat).norm() == 0.0);
    CHECK((a.beta_hat - b.beta_hat).norm() == 0.0);
}

TEST_CASE("calibrate input validation")
{
    const PulseSpec spec = small_pulse(128);
    const SnapshotSet set = planted_set(spec, {0, 0}, 1.0, 4, {}, 0.0, 33);
    const GridSpec grid = GridSpec::centered({0, 0}, 0.2, 0.05);

    CHECK_THROWS_AS(calibrate(set, grid, StoppingRule{}, 0.0), NumericalError);
    GridSpec bad = grid;
    bad.step = 0.0;
    CHECK_THROWS_AS(calibrate(set, bad, StoppingRule{}, 1e-6), DataError);
    bad = grid;
    bad.x_max = bad.x_min - 1.0;
    CHECK_THROWS_AS(calibrate(set, bad, StoppingRule{}, 1e-6), DataError);

    SnapshotSet empty;
    empty.pulse = spec;
    CHECK_THROWS_AS(calibrate(empty, grid, StoppingRule{}, 1e-6), DataError);
}
