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

#include "eacal/campaign.hpp"
#include "eacal/errors.hpp"
#include "eacal/report_io.hpp"
#include "eacal/snapshot_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace
{

namespace fs = std::filesystem;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_numerical = 3;

struct CommonOptions
{
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string format = "csv";
    std::optional<std::size_t> sectors;
    std::optional<std::string> sector_quantity; // squared | linear
    unsigned threads = 0;
};

void add_config_flags(CLI::App *cmd, CommonOptions &opt)
{
    cmd->add_option("--config", opt.config_path, "campaign config file (key = value lines)");
    cmd->add_option("--preset", opt.preset, "canned on-body configuration")
        ->check(CLI::IsMember({"0", "C", "L", "R"}));
    cmd->add_option("--seed", opt.seed, "override the campaign seed");
}

void add_report_flags(CLI::App *cmd, CommonOptions &opt)
{
    cmd->add_option("--sectors", opt.sectors, "number of angular sectors (default 36)");
    cmd->add_option("--sector-quantity", opt.sector_quantity, "average squared or linear magnitudes")
        ->check(CLI::IsMember({"squared", "linear"}));
    cmd->add_option("--threads", opt.threads, "worker threads for the grid search (0 = all cores)");
}

eacal::CampaignConfig build_config(const CommonOptions &opt, bool require_source)
{
    eacal::CampaignConfig cfg;
    if (!opt.preset.empty())
        cfg = eacal::CampaignConfig::preset(opt.preset);
    if (!opt.config_path.empty())
        cfg = eacal::CampaignConfig::from_file(opt.config_path, cfg);
    else if (opt.preset.empty() && require_source)
        throw CLI::ValidationError("either --config or --preset is required");

    if (opt.seed)
        cfg.seed = *opt.seed;
    if (opt.sectors)
        cfg.n_sectors = *opt.sectors;
    if (opt.sector_quantity)
        cfg.squared_sectors = *opt.sector_quantity == "squared";
    cfg.n_threads = opt.threads;
    cfg.validate();
    return cfg;
}

eacal::SnapshotFormat parse_format(const std::string &format)
{
    return format == "binary" ? eacal::SnapshotFormat::binary : eacal::SnapshotFormat::csv;
}

fs::path snapshot_file(const CommonOptions &opt)
{
    return fs::path(opt.out_dir) / (opt.format == "binary" ? "snapshots.bin" : "snapshots.csv");
}

void run_simulate(const CommonOptions &opt)
{
    const auto cfg = build_config(opt, true);
    const auto sim = eacal::run_simulation(cfg);
    fs::create_directories(opt.out_dir);
    eacal::export_snapshots(sim.snapshots, snapshot_file(opt), parse_format(opt.format));
    eacal::export_truth(sim.truth, cfg, fs::path(opt.out_dir) / "truth.json");
    std::printf("wrote %s and truth.json (M=%zu, J=%zu)\n", snapshot_file(opt).string().c_str(),
                sim.snapshots.size(), sim.truth.scatterers.size());
}

void run_calibrate(const CommonOptions &opt, const std::string &snapshots_path, const std::string &reference_path)
{
    const auto cfg = build_config(opt, false);
    const auto set = eacal::import_snapshots(snapshots_path);

    std::optional<eacal::ReferenceInfo> reference;
    if (!reference_path.empty())
        reference = eacal::load_reference(reference_path);

    const auto report = eacal::run_calibration(set, cfg, reference);
    eacal::export_report(report, opt.out_dir);
    std::printf("calibrated %zu snapshots: J=%zu, alpha_bar=%.6g, report in %s\n", set.size(),
                report.calibration.q_hat.size(), report.alpha_bar, opt.out_dir.c_str());
}

void run_metrics(const std::string &report_path, const std::string &reference_path, const std::string &out_dir)
{
    const auto target = eacal::load_report_summary(report_path);

    double ref_max = 0.0;
    if (!reference_path.empty())
        ref_max = eacal::load_reference(reference_path).alpha_max;
    else if (target.label == "0")
        ref_max = target.alpha_max;
    else
        throw eacal::DataError("metrics: AMR needs a label-0 reference report (--reference)");

    std::printf("series,label,mean_magnitude,par_db,amr_db\n");
    std::printf("los,%s,%.17g,%.17g,%.17g\n", target.label.c_str(), target.alpha_bar, target.par_los_db,
                eacal::amr_db(target.alpha_bar, ref_max));
    for (std::size_t j = 0; j < target.beta_bar.size(); ++j)
        std::printf("sp%zu,%s,%.17g,%.17g,%.17g\n", j, target.label.c_str(), target.beta_bar[j],
                    target.par_sp_db[j], eacal::amr_db(target.beta_bar[j], ref_max));

    if (!out_dir.empty())
    {
        fs::create_directories(out_dir);
        const fs::path path = fs::path(out_dir) / "ratios.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw eacal::DataError("cannot open " + path.string() + " for writing");
        out << "series,label,mean_magnitude,par_db,amr_db\n";
        char buf[256];
        std::snprintf(buf, sizeof(buf), "los,%s,%.17g,%.17g,%.17g\n", target.label.c_str(), target.alpha_bar,
                      target.par_los_db, eacal::amr_db(target.alpha_bar, ref_max));
        out << buf;
        for (std::size_t j = 0; j < target.beta_bar.size(); ++j)
        {
            std::snprintf(buf, sizeof(buf), "sp%zu,%s,%.17g,%.17g,%.17g\n", j, target.label.c_str(),
                          target.beta_bar[j], target.par_sp_db[j], eacal::amr_db(target.beta_bar[j], ref_max));
            out << buf;
        }
    }
}

void run_pipeline(const CommonOptions &opt, const std::string &reference_path)
{
    const auto cfg = build_config(opt, true);
    const auto sim = eacal::run_simulation(cfg);
    fs::create_directories(opt.out_dir);
    eacal::export_snapshots(sim.snapshots, snapshot_file(opt), parse_format(opt.format));
    eacal::export_truth(sim.truth, cfg, fs::path(opt.out_dir) / "truth.json");

    std::optional<eacal::ReferenceInfo> reference;
    if (!reference_path.empty())
        reference = eacal::load_reference(reference_path);

    auto report = eacal::run_calibration(sim.snapshots, cfg, reference);
    report.truth = sim.truth;
    eacal::export_report(report, opt.out_dir);
    std::printf("run complete: M=%zu, J_true=%zu, J_hat=%zu, outputs in %s\n", sim.snapshots.size(),
                sim.truth.scatterers.size(), report.calibration.q_hat.size(), opt.out_dir.c_str());
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"synthetic extended-antenna campaigns: snapshot simulation, greedy ML "
                 "calibration and angular magnitude reports"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string snapshots_path, report_path, reference_path, metrics_out;

    auto *simulate = app.add_subcommand("simulate", "generate a synthetic snapshot set");
    add_config_flags(simulate, opt);
    simulate->add_option("--out", opt.out_dir, "output directory")->required();
    simulate->add_option("--format", opt.format, "snapshot file format")
        ->check(CLI::IsMember({"csv", "binary"}));

    auto *calibrate = app.add_subcommand("calibrate", "estimate scattering points from snapshots");
    calibrate->add_option("snapshots", snapshots_path, "snapshot file (csv or binary)")->required();
    add_config_flags(calibrate, opt);
    add_report_flags(calibrate, opt);
    calibrate->add_option("--reference", reference_path, "label-0 report.json for AMR");
    calibrate->add_option("--out", opt.out_dir, "output directory")->required();

    auto *metrics = app.add_subcommand("metrics", "AMR/PAR tables from report files");
    metrics->add_option("report", report_path, "target report.json")->required();
    metrics->add_option("--reference", reference_path, "label-0 report.json for AMR");
    metrics->add_option("--out", metrics_out, "also write ratios.csv here");

    auto *run = app.add_subcommand("run", "simulate followed by calibrate");
    add_config_flags(run, opt);
    add_report_flags(run, opt);
    run->add_option("--reference", reference_path, "label-0 report.json for AMR");
    run->add_option("--out", opt.out_dir, "output directory")->required();
    run->add_option("--format", opt.format, "snapshot file format")
        ->check(CLI::IsMember({"csv", "binary"}));

    try
    {
        app.parse(argc, argv);
        if (simulate->parsed())
            run_simulate(opt);
        else if (calibrate->parsed())
            run_calibrate(opt, snapshots_path, reference_path);
        else if (metrics->parsed())
            run_metrics(report_path, reference_path, metrics_out);
        else if (run->parsed())
            run_pipeline(opt, reference_path);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }
    catch (const eacal::DataError &e)
    {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return exit_data;
    }
    catch (const eacal::NumericalError &e)
    {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return exit_numerical;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numerical;
    }
    return exit_ok;
}
