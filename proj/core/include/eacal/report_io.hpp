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

#ifndef EACAL_REPORT_IO_HPP
#define EACAL_REPORT_IO_HPP

#include "eacal/campaign.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace eacal
{

// Writes the full report into out_dir:
//   report.json     machine-readable report
//   scatterers.csv  extracted points with beta_bar / PAR / AMR
//   amplitudes.csv  per-snapshot LOS amplitude over AOA
//   sectors.csv     sector-averaged angular curves (LOS + strongest points)
//   ratios.csv      AMR / PAR summary
//   ellipse.csv     covariance-ellipse polyline (scale factor recorded)
// Byte output is deterministic for identical reports.
void export_report(const CampaignReport &report, const std::filesystem::path &out_dir);

// truth.json for a synthetic campaign.
void export_truth(const GroundTruth &truth, const CampaignConfig &config,
                  const std::filesystem::path &path);

// Pulls the AMR denominator out of a previously exported report.json.
ReferenceInfo load_reference(const std::filesystem::path &report_json);

// Summary slice of a report.json, enough to rebuild AMR/PAR tables.
struct ReportSummary
{
    std::string label;
    double alpha_bar = 0.0;
    double alpha_max = 0.0;
    double par_los_db = 0.0;
    std::vector<double> beta_bar;
    std::vector<double> par_sp_db;
};

ReportSummary load_report_summary(const std::filesystem::path &report_json);

} // namespace eacal

#endif
