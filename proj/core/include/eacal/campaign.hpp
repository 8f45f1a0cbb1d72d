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

#ifndef EACAL_CAMPAIGN_HPP
#define EACAL_CAMPAIGN_HPP

#include "eacal/estimator.hpp"
#include "eacal/geometry.hpp"
#include "eacal/metrics.hpp"
#include "eacal/model.hpp"
#include "eacal/waveform.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eacal
{

// Everything needed to generate and calibrate one campaign. A flat
// key-value text file maps onto these fields; see from_file.
struct CampaignConfig
{
    int schema_version = 1;
    std::string label = "0"; // on-body position: 0, C, L or R
    std::uint64_t seed = 0;

    PulseSpec pulse;
    FrameSpec frame;              // frame.origin is the agent position
    double anchor_radius_m = 2.5; // synthetic anchor circle
    std::size_t n_snapshots = 200;

    ExtendedAntennaModel ea;
    NoiseSpec noise; // noise.seed == 0 derives the stream from `seed`

    // Noise variance assumed by the calibration. 0 falls back to
    // noise.variance, and failing that to an estimate from the data; a
    // positive value here lets noise-free synthetic campaigns calibrate.
    double noise_floor = 0.0;

    std::optional<GridSpec> grid; // default: 1.5 m square at 2 cm around the agent
    StoppingRule stopping;
    bool joint_refit = false;
    unsigned n_threads = 0;

    std::size_t n_sectors = 36;
    bool squared_sectors = true; // sector plots use squared magnitudes
    double ellipse_scale = 2.0;  // covariance ellipse enlargement for export

    GridSpec effective_grid() const;
    void validate() const;

    // Canned on-body configurations: "0" is the reference agent without a
    // body, "C"/"L"/"R" add a body-offset scatterer cloud and an LOS notch
    // opposite the heading (shifted laterally for L and R).
    static CampaignConfig preset(std::string_view label);

    // Key-value overrides applied on top of `base` (defaults when omitted).
    // Unknown keys are rejected. Lines are `key = value`, '#' starts a
    // comment.
    static CampaignConfig from_file(const std::filesystem::path &path);
    static CampaignConfig from_file(const std::filesystem::path &path, const CampaignConfig &base);
};

// Generative state behind a synthetic snapshot set.
struct GroundTruth
{
    std::vector<Point2> scatterers;
    Eigen::MatrixXcd marks;     // M x J
    Eigen::VectorXcd los_gains; // per snapshot
};

struct SimulationOutput
{
    SnapshotSet snapshots;
    GroundTruth truth;
};

// Builds the anchor circle, samples the extended antenna and synthesizes
// all M snapshots. Deterministic in config.seed.
SimulationOutput run_simulation(const CampaignConfig &config);

// alpha_max of a label-0 campaign, the AMR denominator.
struct ReferenceInfo
{
    std::string label;
    double alpha_max = 0.0;
};

struct SectorSeries
{
    std::string name; // "los" or "sp<j>"
    SectorStats stats;
};

struct CampaignReport
{
    std::string label;
    std::uint64_t seed = 0;
    CalibrationResult calibration;
    std::vector<double> aoas; // per snapshot

    std::optional<ShapeEstimate> shape; // absent when no point was extracted
    double ellipse_scale = 2.0;

    double alpha_bar = 0.0;
    double alpha_max = 0.0;
    std::vector<double> beta_bar; // per extracted scatterer

    double par_los_db = 0.0;
    std::vector<double> par_sp_db;

    // AMR values exist only when a reference is available (a supplied
    // label-0 report, or the campaign itself when its label is 0).
    std::optional<double> amr_los_db;
    std::vector<double> amr_sp_db;

    std::vector<std::size_t> strongest; // up to two scatterers by beta_bar, ties by index

    std::vector<SectorSeries> sectors; // LOS first, then the strongest scatterers
    std::size_t n_sectors = 36;
    bool squared_sectors = true;

    std::optional<GroundTruth> truth; // carried along for synthetic campaigns
};

// Calibrates a snapshot set and assembles all report quantities. When the
// config's noise variance is zero the noise floor is estimated from the
// data.
CampaignReport run_calibration(const SnapshotSet &snapshots, const CampaignConfig &config,
                               const std::optional<ReferenceInfo> &reference = std::nullopt);

} // namespace eacal

#endif
