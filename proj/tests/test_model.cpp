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

#include "eacal/model.hpp"

#include "eacal/errors.hpp"
#include "eacal/rng.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

using namespace eacal;

namespace
{
constexpr double pi = std::numbers::pi;

ExtendedAntennaModel body_model()
{
    ExtendedAntennaModel model;
    model.mu = {-0.1, 0.05};
    model.sigma << 0.01, 0.002, 0.002, 0.02;
    model.mean_count = 7.0;
    return model;
}
} // namespace

TEST_CASE("sample_mppp degenerate cases")
{
    ExtendedAntennaModel model = body_model();

    SUBCASE("zero mean count never yields points")
    {
        model.mean_count = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed)
            CHECK(sample_mppp(model, seed).empty());
    }

    SUBCASE("zero covariance collapses onto mu")
    {
        model.sigma = Eigen::Matrix2d::Zero();
        model.mean_count = 3.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed)
            for (const auto &q : sample_mppp(model, seed))
            {
                CHECK(q.x == model.mu.x);
                CHECK(q.y == model.mu.y);
            }
    }

    SUBCASE("rank-one covariance stays on its axis")
    {
        model.sigma << 0.04, 0.0, 0.0, 0.0;
        model.mean_count = 40.0;
        const auto points = sample_mppp(model, 5);
        for (const auto &q : points)
            CHECK(q.y == doctest::Approx(model.mu.y).epsilon(1e-12));
    }
}

TEST_CASE("sample_mppp is deterministic in its seed")
{
    const ExtendedAntennaModel model = body_model();
    const auto a = sample_mppp(model, 123);
    const auto b = sample_mppp(model, 123);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        CHECK(a[j] == b[j]);
}

TEST_CASE("sample_mppp count follows the Poisson mean")
{
    const ExtendedAntennaModel model = body_model();
    double total = 0.0;
    constexpr int draws = 20000;
    for (int seed = 0; seed < draws; ++seed)
        total += static_cast<double>(sample_mppp(model, static_cast<std::uint64_t>(seed)).size());
    CHECK(total / draws == doctest::Approx(model.mean_count).epsilon(0.02));
}

TEST_CASE("sample_mppp pooled covariance approaches sigma")
{
    ExtendedAntennaModel model = body_model();
    model.mean_count = 50.0;
    std::vector<Point2> pooled;
    for (int seed = 0; seed < 400; ++seed)
    {
        const auto pts = sample_mppp(model, static_cast<std::uint64_t>(seed));
        pooled.insert(pooled.end(), pts.begin(), pts.end());
    }
    const ShapeEstimate est = shape_estimate(pooled);
    CHECK((est.sigma_hat - model.sigma).norm() < 0.08 * model.sigma.norm());
    CHECK(est.mu_hat.x == doctest::Approx(model.mu.x).epsilon(0.05));
}

TEST_CASE("generate_marks magnitudes and determinism")
{
    MarkSpec spec{0.4, 1.0, true};
    const std::vector<Point2> points{{0.3, 0.0}, {0.0, -0.2}};
    const std::vector<double> aoas{0.0, pi / 3, -pi / 2, pi};
    const Point2 mu{0, 0};

    SUBCASE("huge angular width flattens the pattern")
    {
        spec.angular_width = 3e3;
        const auto marks = generate_marks(spec, points, aoas, mu, 0.0, 7);
        for (Eigen::Index m = 0; m < marks.rows(); ++m)
            for (Eigen::Index j = 0; j < marks.cols(); ++j)
                CHECK(std::abs(std::abs(marks(m, j)) - spec.base_magnitude) < 1e-6);
    }

    SUBCASE("zero base magnitude gives the zero matrix")
    {
        spec.base_magnitude = 0.0;
        const auto marks = generate_marks(spec, points, aoas, mu, 0.0, 7);
        CHECK(marks.norm() == 0.0);
    }

    SUBCASE("same seed reproduces bit-identical marks")
    {
        const auto m1 = generate_marks(spec, points, aoas, mu, 0.0, 7);
        const auto m2 = generate_marks(spec, points, aoas, mu, 0.0, 7);
        CHECK((m1 - m2).norm() == 0.0);
        const auto m3 = generate_marks(spec, points, aoas, mu, 0.0, 8);
        CHECK((m1 - m3).norm() > 0.0);
    }

    SUBCASE("peak direction gets the full base magnitude")
    {
        spec.random_phase = false;
        // first scatterer sits due east of mu, first aoa is 0
        const auto marks = generate_marks(spec, points, aoas, mu, 0.0, 7);
        CHECK(marks(0, 0).real() == doctest::Approx(spec.base_magnitude).epsilon(1e-12));
        // magnitude decays with the wrapped angular distance
        CHECK(std::abs(marks(3, 0)) < std::abs(marks(1, 0)));
    }
}

TEST_CASE("generate_marks magnitudes are invariant under global rotation")
{
    const MarkSpec spec{0.7, 0.8, true};
    const std::vector<Point2> points{{0.2, 0.1}, {-0.1, 0.3}, {0.0, -0.4}};
    const Point2 mu{0.05, 0.0};
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial)
    {
        const double delta = rng.uniform(-pi, pi);
        std::vector<double> aoas, rotated;
        for (int m = 0; m < 8; ++m)
        {
            const double a = rng.uniform(-pi, pi);
            aoas.push_back(wrap_angle(a));
            rotated.push_back(wrap_angle(a + delta));
        }
        // rotating all aoas by delta and the frame heading by -delta shifts
        // every peak direction by delta as well
        const auto base = generate_marks(spec, points, aoas, mu, 0.0, 17);
        const auto turned = generate_marks(spec, points, rotated, mu, -delta, 17);
        for (Eigen::Index m = 0; m < base.rows(); ++m)
            for (Eigen::Index j = 0; j < base.cols(); ++j)
                CHECK(std::abs(turned(m, j)) == doctest::Approx(std::abs(base(m, j))).epsilon(1e-9));
    }
}

TEST_CASE("los_gain notch shape")
{
    const GainSpec spec{2.0, pi, 30.0, 1.0};

    SUBCASE("notch center reaches full depth")
    {
        const auto g = los_gain(spec, pi);
        CHECK(std::abs(g) == doctest::Approx(2.0 * std::pow(10.0, -30.0 / 20.0)).epsilon(1e-12));
        CHECK(g.imag() == 0.0);
    }

    SUBCASE("outside the support the gain is flat")
    {
        CHECK(std::abs(los_gain(spec, pi - 0.6)) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::abs(los_gain(spec, 0.0)) == doctest::Approx(2.0).epsilon(1e-12));
    }

    SUBCASE("zero depth disables the notch")
    {
        const GainSpec flat{2.0, pi, 0.0, 1.0};
        for (double phi = -3.0; phi <= 3.0; phi += 0.37)
            CHECK(std::abs(los_gain(flat, phi)) == doctest::Approx(2.0).epsilon(1e-12));
    }

    SUBCASE("support edge tapers to the flat gain")
    {
        const double edge = pi - 0.5 * spec.notch_width;
        CHECK(std::abs(los_gain(spec, edge)) == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("shape_estimate moments")
{
    SUBCASE("single point")
    {
        const std::vector<Point2> pts{{1.5, -2.0}};
        const ShapeEstimate est = shape_estimate(pts);
        CHECK(est.mu_hat.x == 1.5);
        CHECK(est.mu_hat.y == -2.0);
        CHECK(est.sigma_hat.norm() == 0.0);
    }

    SUBCASE("two symmetric points")
    {
        const std::vector<Point2> pts{{1, 0}, {-1, 0}};
        const ShapeEstimate est = shape_estimate(pts);
        CHECK(est.mu_hat.x == 0.0);
        CHECK(est.mu_hat.y == 0.0);
        CHECK(est.sigma_hat(0, 0) == 1.0); // 1/J normalization
        CHECK(est.sigma_hat(0, 1) == 0.0);
        CHECK(est.sigma_hat(1, 1) == 0.0);
    }

    SUBCASE("empty set is an error")
    {
        CHECK_THROWS_AS(shape_estimate({}), DataError);
    }

    SUBCASE("law of large numbers against the generating model")
    {
        ExtendedAntennaModel model = body_model();
        model.mean_count = 10000.0;
        const auto points = sample_mppp(model, 3);
        const ShapeEstimate est = shape_estimate(points);
        CHECK((est.sigma_hat - model.sigma).norm() < 0.05 * model.sigma.norm());
    }
}

TEST_CASE("shape_estimate equivariance")
{
    Rng rng(41);
    std::vector<Point2> pts;
    for (int i = 0; i < 40; ++i)
        pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const ShapeEstimate base = shape_estimate(pts);

    SUBCASE("translation shifts mu and leaves sigma")
    {
        const Point2 shift{3.25, -1.5};
        std::vector<Point2> moved;
        for (const auto &p : pts)
            moved.push_back(p + shift);
        const ShapeEstimate est = shape_estimate(moved);
        CHECK(est.mu_hat.x == doctest::Approx(base.mu_hat.x + shift.x).epsilon(1e-12));
        CHECK(est.mu_hat.y == doctest::Approx(base.mu_hat.y + shift.y).epsilon(1e-12));
        CHECK((est.sigma_hat - base.sigma_hat).norm() < 1e-12);
    }

    SUBCASE("rotation conjugates sigma")
    {
        const double angle = 0.7;
        const Eigen::Matrix2d rot = Eigen::Rotation2Dd(angle).toRotationMatrix();
        std::vector<Point2> turned;
        for (const auto &p : pts)
        {
            const Eigen::Vector2d v = rot * Eigen::Vector2d{p.x, p.y};
            turned.push_back({v.x(), v.y()});
        }
        const ShapeEstimate est = shape_estimate(turned);
        const Eigen::Matrix2d expected = rot * base.sigma_hat * rot.transpose();
        CHECK((est.sigma_hat - expected).norm() < 1e-12);
    }
}

TEST_CASE("model validation rejects bad parameters")
{
    ExtendedAntennaModel model = body_model();
    model.sigma << 1.0, 0.9, 0.9, -1.0; // indefinite
    CHECK_THROWS_AS(model.validate(), DataError);

    model = body_model();
    model.sigma(0, 1) = 0.5; // asymmetric
    CHECK_THROWS_AS(model.validate(), DataError);

    model = body_model();
    model.mean_count = -1.0;
    CHECK_THROWS_AS(model.validate(), DataError);

    CHECK_THROWS_AS((MarkSpec{-0.1, 1.0, true}).validate(), DataError);
    CHECK_THROWS_AS((MarkSpec{0.1, 0.0, true}).validate(), DataError);
    CHECK_THROWS_AS((GainSpec{0.0, 0.0, 0.0, 1.0}).validate(), DataError);
}
