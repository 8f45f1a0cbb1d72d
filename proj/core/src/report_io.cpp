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

#include "eacal/report_io.hpp"

#include "eacal/errors.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace eacal
{

namespace
{

using ordered_json = nlohmann::ordered_json;

std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    return out;
}

ordered_json complex_json(const std::complex<double> &v)
{
    return ordered_json::array({v.real(), v.imag()});
}

ordered_json point_json(Point2 p)
{
    return {{"x", p.x}, {"y", p.y}};
}

ordered_json matrix2_json(const Eigen::Matrix2d &m)
{
    return ordered_json::array({ordered_json::array({m(0, 0), m(0, 1)}),
                                ordered_json::array({m(1, 0), m(1, 1)})});
}

ordered_json truth_json(const GroundTruth &truth)
{
    ordered_json j;
    j["scatterers"] = ordered_json::array();
    for (const auto &p : truth.scatterers)
        j["scatterers"].push_back(point_json(p));
    j["marks"] = ordered_json::array();
    for (Eigen::Index m = 0; m < truth.marks.rows(); ++m)
    {
        ordered_json row = ordered_json::array();
        for (Eigen::Index col = 0; col < truth.marks.cols(); ++col)
            row.push_back(complex_json(truth.marks(m, col)));
        j["marks"].push_back(std::move(row));
    }
    j["los_gains"] = ordered_json::array();
    for (Eigen::Index m = 0; m < truth.los_gains.size(); ++m)
        j["los_gains"].push_back(complex_json(truth.los_gains[m]));
    return j;
}

ordered_json sector_json(const SectorSeries &series)
{
    ordered_json j;
    j["name"] = series.name;
    j["centers"] = series.stats.centers;
    j["means"] = series.stats.means; // NaN serializes as null: explicit gap
    j["counts"] = series.stats.counts;
    return j;
}

void write_scatterers_csv(const CampaignReport &report, const std::filesystem::path &path)
{
    auto out = open_out(path);
    out << "j,x_m,y_m,beta_bar,par_db,amr_db\n";
    for (std::size_t j = 0; j < report.calibration.q_hat.size(); ++j)
    {
        const auto &q = report.calibration.q_hat[j];
        out << j << ',' << fmt_double(q.x) << ',' << fmt_double(q.y) << ',' << fmt_double(report.beta_bar[j])
            << ',' << fmt_double(report.par_sp_db[j]) << ',';
        if (!report.amr_sp_db.empty())
            out << fmt_double(report.amr_sp_db[j]);
        out << '\n';
    }
}

void write_amplitudes_csv(const CampaignReport &report, const std::filesystem::path &path)
{
    auto out = open_out(path);
    out << "m,aoa_rad,alpha_re,alpha_im,alpha_abs\n";
    for (Eigen::Index m = 0; m < report.calibration.alpha_hat.size(); ++m)
    {
        const auto a = report.calibration.alpha_hat[m];
        out << m << ',' << fmt_double(report.aoas[static_cast<std::size_t>(m)]) << ',' << fmt_double(a.real())
            << ',' << fmt_double(a.imag()) << ',' << fmt_double(std::abs(a)) << '\n';
    }
}

void write_sectors_csv(const CampaignReport &report, const std::filesystem::path &path)
{
    auto out = open_out(path);
    out << "series,sector,center_rad,count,mean\n";
    for (const auto &series : report.sectors)
        for (std::size_t k = 0; k < series.stats.n_sectors; ++k)
            out << series.name << ',' << k << ',' << fmt_double(series.stats.centers[k]) << ','
                << series.stats.counts[k] << ',' << fmt_double(series.stats.means[k]) << '\n';
}

void write_ratios_csv(const CampaignReport &report, const std::filesystem::path &path)
{
    auto out = open_out(path);
    out << "series,label,mean_magnitude,par_db,amr_db\n";
    out << "los," << report.label << ',' << fmt_double(report.alpha_bar) << ',' << fmt_double(report.par_los_db)
        << ',';
    if (report.amr_los_db)
        out << fmt_double(*report.amr_los_db);
    out << '\n';
    for (std::size_t j = 0; j < report.beta_bar.size(); ++j)
    {
        out << "sp" << j << ',' << report.label << ',' << fmt_double(report.beta_bar[j]) << ','
            << fmt_double(report.par_sp_db[j]) << ',';
        if (!report.amr_sp_db.empty())
            out << fmt_double(report.amr_sp_db[j]);
        out << '\n';
    }
}

void write_ellipse_csv(const CampaignReport &report, const std::filesystem::path &path)
{
    auto out = open_out(path);
    out << "# covariance ellipse polyline, scale_factor=" << fmt_double(report.ellipse_scale) << "\n";
    out << "idx,x_m,y_m\n";
    if (!report.shape)
        return;

    // Principal-axis parametrization: mu + scale * V * diag(sqrt(lambda)) *
    // (cos t, sin t).
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(report.shape->sigma_hat);
    const Eigen::Vector2d radii = es.eigenvalues().cwiseMax(0.0).cwiseSqrt() * report.ellipse_scale;
    const Eigen::Matrix2d axes = es.eigenvectors();
    constexpr int segments = 64;
    for (int i = 0; i <= segments; ++i)
    {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / segments;
        const Eigen::Vector2d p =
            axes * Eigen::Vector2d(radii.x() * std::cos(t), radii.y() * std::sin(t));
        out << i << ',' << fmt_double(report.shape->mu_hat.x + p.x()) << ','
            << fmt_double(report.shape->mu_hat.y + p.y()) << '\n';
    }
}

ordered_json report_json(const CampaignReport &report)
{
    ordered_json j;
    j["schema_version"] = 1;
    j["label"] = report.label;
    j["seed"] = report.seed;
    j["noise_variance"] = report.calibration.noise_variance;

    j["q_hat"] = ordered_json::array();
    for (const auto &q : report.calibration.q_hat)
        j["q_hat"].push_back(point_json(q));

    j["alpha_hat"] = ordered_json::array();
    for (Eigen::Index m = 0; m < report.calibration.alpha_hat.size(); ++m)
        j["alpha_hat"].push_back(complex_json(report.calibration.alpha_hat[m]));

    j["beta_hat"] = ordered_json::array();
    for (Eigen::Index m = 0; m < report.calibration.beta_hat.rows(); ++m)
    {
        ordered_json row = ordered_json::array();
        for (Eigen::Index col = 0; col < report.calibration.beta_hat.cols(); ++col)
            row.push_back(complex_json(report.calibration.beta_hat(m, col)));
        j["beta_hat"].push_back(std::move(row));
    }

    j["aoas"] = report.aoas;
    j["loglik_trace"] = report.calibration.loglik_trace;

    if (report.shape)
    {
        j["shape"] = {{"mu_hat", point_json(report.shape->mu_hat)},
                      {"sigma_hat", matrix2_json(report.shape->sigma_hat)},
                      {"ellipse_scale", report.ellipse_scale}};
    }
    else
    {
        j["shape"] = nullptr;
    }

    ordered_json metrics;
    metrics["alpha_bar"] = report.alpha_bar;
    metrics["alpha_max"] = report.alpha_max;
    metrics["beta_bar"] = report.beta_bar;
    metrics["par_los_db"] = report.par_los_db;
    metrics["par_sp_db"] = report.par_sp_db;
    metrics["amr_los_db"] = report.amr_los_db ? ordered_json(*report.amr_los_db) : ordered_json(nullptr);
    metrics["amr_sp_db"] = report.amr_sp_db;
    metrics["strongest"] = report.strongest;
    j["metrics"] = std::move(metrics);

    ordered_json sectors;
    sectors["n_sectors"] = report.n_sectors;
    sectors["squared"] = report.squared_sectors;
    sectors["series"] = ordered_json::array();
    for (const auto &s : report.sectors)
        sectors["series"].push_back(sector_json(s));
    j["sectors"] = std::move(sectors);

    j["ground_truth"] = report.truth ? truth_json(*report.truth) : ordered_json(nullptr);
    return j;
}

} // namespace

void export_report(const CampaignReport &report, const std::filesystem::path &out_dir)
{
    std::filesystem::create_directories(out_dir);
    {
        auto out = open_out(out_dir / "report.json");
        out << report_json(report).dump(2) << '\n';
    }
    write_scatterers_csv(report, out_dir / "scatterers.csv");
    write_amplitudes_csv(report, out_dir / "amplitudes.csv");
    write_sectors_csv(report, out_dir / "sectors.csv");
    write_ratios_csv(report, out_dir / "ratios.csv");
    write_ellipse_csv(report, out_dir / "ellipse.csv");
}

void export_truth(const GroundTruth &truth, const CampaignConfig &config, const std::filesystem::path &path)
{
    ordered_json j;
    j["schema_version"] = 1;
    j["label"] = config.label;
    j["seed"] = config.seed;
    j["agent"] = point_json(config.frame.origin);
    j["model"] = {{"mu", point_json(config.ea.mu)},
                  {"sigma", matrix2_json(config.ea.sigma)},
                  {"mean_count", config.ea.mean_count},
                  {"mark",
                   {{"base_magnitude", config.ea.mark.base_magnitude},
                    {"angular_width", config.ea.mark.angular_width},
                    {"random_phase", config.ea.mark.random_phase}}},
                  {"gain",
                   {{"max_gain", config.ea.gain.max_gain},
                    {"notch_direction", config.ea.gain.notch_direction},
                    {"notch_depth_db", config.ea.gain.notch_depth_db},
                    {"notch_width", config.ea.gain.notch_width}}}};
    j.update(truth_json(truth));

    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

ReferenceInfo load_reference(const std::filesystem::path &report_json_path)
{
    const ReportSummary summary = load_report_summary(report_json_path);
    if (summary.label != "0")
        throw DataError(report_json_path.string() + ": reference report must have label 0, found '" +
                        summary.label + "'");
    return {summary.label, summary.alpha_max};
}

ReportSummary load_report_summary(const std::filesystem::path &report_json_path)
{
    std::ifstream in(report_json_path);
    if (!in)
        throw DataError("cannot open " + report_json_path.string());
    ordered_json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw DataError(report_json_path.string() + ": " + e.what());
    }

    try
    {
        ReportSummary summary;
        summary.label = j.at("label").get<std::string>();
        const auto &metrics = j.at("metrics");
        summary.alpha_bar = metrics.at("alpha_bar").get<double>();
        summary.alpha_max = metrics.at("alpha_max").get<double>();
        summary.par_los_db = metrics.at("par_los_db").get<double>();
        summary.beta_bar = metrics.at("beta_bar").get<std::vector<double>>();
        summary.par_sp_db = metrics.at("par_sp_db").get<std::vector<double>>();
        return summary;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw DataError(report_json_path.string() + ": malformed report: " + e.what());
    }
}

} // namespace eacal
