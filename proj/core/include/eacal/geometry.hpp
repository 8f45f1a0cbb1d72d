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

#ifndef EACAL_GEOMETRY_HPP
#define EACAL_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace eacal
{

inline constexpr double speed_of_light = 299792458.0; // m/s, exact

// 2-D position in meters. Agent, anchor and scatterer positions all use it.
struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point2 a, Point2 b) = default;

    void validate() const; // finite coordinates
};

double norm(Point2 p);
double distance(Point2 a, Point2 b);

// Agent-centered reference frame: origin is the agent position, heading is
// the direction of zero angle of arrival. Positive angles run counter
// clockwise.
struct FrameSpec
{
    Point2 origin;
    double heading = 0.0; // radians, in (-pi, pi]

    void validate() const;
};

// Anchor positions with their angles of arrival in a common frame.
struct AnchorSet
{
    std::vector<Point2> positions;
    std::vector<double> aoas; // radians, one per anchor, each in (-pi, pi]

    std::size_t size() const { return positions.size(); }
    void validate() const;
};

// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

// One-way line-of-sight propagation delay ||p - a|| / c.
double los_delay(Point2 p, Point2 a);

// Two-hop delay of the path anchor -> scatterer -> agent,
// (||q - a|| + ||p - q||) / c. Never less than the LOS delay.
double scatter_delay(Point2 a, Point2 q, Point2 p);

// Angle of arrival of the direction (a - origin), counter clockwise from the
// frame heading, wrapped to (-pi, pi]. Throws DataError when a coincides
// with the frame origin.
double aoa(const FrameSpec &frame, Point2 a);

// M anchors uniformly spaced counter clockwise on a circle around the frame
// origin; anchor 0 lies in the heading direction.
AnchorSet synthetic_circle_anchors(const FrameSpec &frame, double radius_m, std::size_t count);

} // namespace eacal

#endif
