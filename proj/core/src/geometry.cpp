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

#include "eacal/geometry.hpp"

#include "eacal/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace eacal
{

namespace
{
constexpr double pi = std::numbers::pi;
}

void Point2::validate() const
{
    if (!std::isfinite(x) || !std::isfinite(y))
        throw DataError("Point2: coordinates must be finite");
}

double norm(Point2 p)
{
    return std::hypot(p.x, p.y);
}

double distance(Point2 a, Point2 b)
{
    return norm(a - b);
}

void FrameSpec::validate() const
{
    origin.validate();
    if (!std::isfinite(heading) || heading <= -pi || heading > pi)
        throw DataError("FrameSpec: heading must lie in (-pi, pi]");
}

void AnchorSet::validate() const
{
    if (positions.empty())
        throw DataError("AnchorSet: need at least one anchor");
    if (aoas.size() != positions.size())
        throw DataError("AnchorSet: aoas length must match positions length");
    for (const auto &p : positions)
        p.validate();
    for (double a : aoas)
        if (!std::isfinite(a) || a <= -pi || a > pi)
            throw DataError("AnchorSet: every aoa must lie in (-pi, pi]");
}

double wrap_angle(double angle)
{
    double w = std::remainder(angle, 2.0 * pi); // [-pi, pi]
    if (w <= -pi)
        w = pi;
    return w;
}

double los_delay(Point2 p, Point2 a)
{
    return distance(p, a) / speed_of_light;
}

double scatter_delay(Point2 a, Point2 q, Point2 p)
{
    return (distance(q, a) + distance(p, q)) / speed_of_light;
}

double aoa(const FrameSpec &frame, Point2 a)
{
    const Point2 d = a - frame.origin;
    if (d.x == 0.0 && d.y == 0.0)
        throw DataError("aoa: anchor coincides with the frame origin, direction undefined");
    return wrap_angle(std::atan2(d.y, d.x) - frame.heading);
}

AnchorSet synthetic_circle_anchors(const FrameSpec &frame, double radius_m, std::size_t count)
{
    frame.validate();
    if (!(radius_m > 0.0))
        throw DataError("synthetic_circle_anchors: radius must be positive");
    if (count < 1)
        throw DataError("synthetic_circle_anchors: need at least one anchor");

    AnchorSet out;
    out.positions.reserve(count);
    out.aoas.reserve(count);
    for (std::size_t m = 0; m < count; ++m)
    {
        const double angle = frame.heading + 2.0 * pi * static_cast<double>(m) / static_cast<double>(count);
        const Point2 pos = frame.origin + Point2{radius_m * std::cos(angle), radius_m * std::sin(angle)};
        out.positions.push_back(pos);
        out.aoas.push_back(aoa(frame, pos));
    }
    return out;
}

} // namespace eacal
