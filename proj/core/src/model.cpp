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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace eacal
{

namespace
{
constexpr double pi = std::numbers::pi;
}

void MarkSpec::validate() const
{
    if (!(base_magnitude >= 0.0) || !std::isfinite(base_magnitude))
        throw DataError("MarkSpec: base magnitude must be nonnegative");
    if (!(angular_width > 0.0))
        throw DataError("MarkSpec: angular width must be positive");
}

void GainSpec::validate() const
{
    if (!(max_gain > 0.0) || !std::isfinite(max_gain))
        throw DataError("GainSpec: max gain must be positive");
    if (!(notch_depth_db >= 0.0) || !std::isfinite(notch_depth_db))
        throw DataError("GainSpec: notch depth must be nonnegative");
    if (!(notch_width > 0.0))
        throw DataError("GainSpec: notch width must be positive");
}

void ExtendedAntennaModel::validate() const
{
    mu.validate();
    if (!(mean_count >= 0.0) || !std::isfinite(mean_count))
        throw DataError("ExtendedAntennaModel: mean count must be nonnegative");
    if (!sigma.allFinite())
        throw DataError("ExtendedAntennaModel: sigma must be finite");
    if (std::abs(sigma(0, 1) - sigma(1, 0)) > 1e-12 * (1.0 + sigma.cwiseAbs().maxCoeff()))
        throw DataError("ExtendedAntennaModel: sigma must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sigma);
    const double scale = 1.0 + sigma.cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-12 * scale)
        throw DataError("ExtendedAntennaModel: sigma must be positive semi-definite");
    mark.validate();
    gain.validate();
}

void ScattererSet::validate() const
{
    if (static_cast<std::size_t>(marks.cols()) != points.size())
        throw DataError("ScattererSet: marks column count must equal the number of points");
    for (const auto &p : points)
        p.validate();
}

std::vector<Point2> sample_mppp(const ExtendedAntennaModel &model, std::uint64_t seed)
{
    model.validate();
    Rng rng(seed);
    const std::uint64_t count = rng.poisson(model.mean_count);

    // Principal-axis factorization handles singular sigma without a
    // Cholesky breakdown: zero eigenvalues simply contribute nothing.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(model.sigma);
    const Eigen::Vector2d scale = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix2d axes = es.eigenvectors();

    std::vector<Point2> points;
    points.reserve(count);
    for (std::uint64_t j = 0; j < count; ++j)
    {
        const Eigen::Vector2d z{rng.normal(), rng.normal()};
        const Eigen::Vector2d offset = axes * (scale.asDiagonal() * z);
        points.push_back({model.mu.x + offset.x(), model.mu.y + offset.y()});
    }
    return points;
}

Eigen::MatrixXcd generate_marks(const MarkSpec &spec, std::span<const Point2> points,
                                std::span<const double> aoas, Point2 mu, double heading,
                                std::uint64_t seed)
{
    spec.validate();
    const Eigen::Index m_count = static_cast<Eigen::Index>(aoas.size());
    const Eigen::Index j_count = static_cast<Eigen::Index>(points.size());

    // Peak visibility direction per scatterer: from the EA center towards
    // the point, in the frame of the aoas. A point exactly at mu gets the
    // heading direction (atan2(0, 0) = 0).
    std::vector<double> peak(points.size());
    for (std::size_t j = 0; j < points.size(); ++j)
    {
        const Point2 d = points[j] - mu;
        peak[j] = wrap_angle(std::atan2(d.y, d.x) - heading);
    }

    Rng rng(seed);
    const double inv_two_w2 = 1.0 / (2.0 * spec.angular_width * spec.angular_width);
    Eigen::MatrixXcd marks(m_count, j_count);
    for (Eigen::Index m = 0; m < m_count; ++m)
    {
        for (Eigen::Index j = 0; j < j_count; ++j)
        {
            const double delta = wrap_angle(aoas[static_cast<std::size_t>(m)] - peak[static_cast<std::size_t>(j)]);
            const double mag = spec.base_magnitude * std::exp(-delta * delta * inv_two_w2);
            const double phase = spec.random_phase ? rng.uniform(0.0, 2.0 * pi) : 0.0;
            marks(m, j) = std::polar(mag, phase);
        }
    }
    return marks;
}

std::complex<double> los_gain(const GainSpec &spec, double phi)
{
    spec.validate();
    const double delta = wrap_angle(phi - spec.notch_direction);
    double bump = 0.0;
    if (std::abs(delta) <= 0.5 * spec.notch_width)
        bump = 0.5 * (1.0 + std::cos(2.0 * pi * delta / spec.notch_width));
    const double magnitude = spec.max_gain * std::pow(10.0, -spec.notch_depth_db * bump / 20.0);
    return {magnitude, 0.0};
}

ShapeEstimate shape_estimate(std::span<const Point2> points)
{
    if (points.empty())
        throw DataError("shape_estimate: need at least one point");

    const double inv_j = 1.0 / static_cast<double>(points.size());
    Point2 mu{0.0, 0.0};
    for (const auto &p : points)
        mu = mu + p;
    mu = inv_j * mu;

    Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
    for (const auto &p : points)
    {
        const Point2 d = p - mu;
        sigma(0, 0) += d.x * d.x;
        sigma(0, 1) += d.x * d.y;
        sigma(1, 1) += d.y * d.y;
    }
    sigma(1, 0) = sigma(0, 1);
    sigma *= inv_j;
    return {mu, sigma};
}

} // namespace eacal
