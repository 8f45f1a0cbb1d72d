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

#ifndef EACAL_MODEL_HPP
#define EACAL_MODEL_HPP

#include "eacal/geometry.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace eacal
{

// Generative law for the complex scattering coefficients. The magnitude of
// mark (m, j) decays with the angular distance between the snapshot AOA and
// the direction of maximal visibility of scatterer j; the phase is uniform
// and independent per (m, j) unless random_phase is off.
struct MarkSpec
{
    double base_magnitude = 0.1;
    double angular_width = 1.0; // radians; large values give a flat pattern
    bool random_phase = true;

    void validate() const;
};

// Direction-dependent LOS amplitude: a flat gain with a raised-cosine notch
// modeling body blockage. Depth is applied in dB at the notch center and
// tapers to zero at the edge of the support.
struct GainSpec
{
    double max_gain = 1.0;
    double notch_direction = 3.14159265358979323846; // radians
    double notch_depth_db = 0.0;
    double notch_width = 3.0; // full angular support, radians

    void validate() const;
};

// Ground-truth generative model of the extended antenna: scattering points
// form a marked Poisson point process with Poisson-distributed count and a
// Gaussian spatial intensity with mean mu and covariance sigma.
struct ExtendedAntennaModel
{
    Point2 mu;
    Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero(); // symmetric PSD
    double mean_count = 0.0;
    MarkSpec mark;
    GainSpec gain;

    void validate() const;
};

// A realized scatterer configuration: J points plus an M x J matrix of
// per-snapshot complex marks.
struct ScattererSet
{
    std::vector<Point2> points;
    Eigen::MatrixXcd marks; // rows: snapshots, cols: scatterers

    void validate() const;
};

// Draws J ~ Poisson(mean_count) points from the Gaussian (mu, sigma).
// A singular sigma collapses sampling onto the corresponding subspace.
std::vector<Point2> sample_mppp(const ExtendedAntennaModel &model, std::uint64_t seed);

// M x J mark matrix. Peak visibility direction of scatterer j defaults to
// the direction from mu to the scatterer, expressed in the same frame as
// the aoas (counter clockwise from `heading`).
Eigen::MatrixXcd generate_marks(const MarkSpec &spec, std::span<const Point2> points,
                                std::span<const double> aoas, Point2 mu, double heading,
                                std::uint64_t seed);

// Complex LOS amplitude for a snapshot arriving from angle phi.
std::complex<double> los_gain(const GainSpec &spec, double phi);

// Sample mean and 1/J-normalized scatter matrix of a point set.
struct ShapeEstimate
{
    Point2 mu_hat;
    Eigen::Matrix2d sigma_hat;
};

ShapeEstimate shape_estimate(std::span<const Point2> points);

} // namespace eacal

#endif
