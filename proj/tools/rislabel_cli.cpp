// SPDX-License-Identifier: Apache-2.0
//
// rislabel: multipath labeling with reconfigurable intelligent surfaces
// Copyright (C) 2026 The rislabel authors
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

// Command line front end: simulate, extract, locate, sweep, cdf.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rislabel/config.hpp"
#include "rislabel/errors.hpp"
#include "rislabel/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rislabel;

namespace
{

struct CommonOptions
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string mode;
    std::optional<int> slots;
    std::optional<int> trials;
    std::optional<int> threads;
    std::string out = "out";
    std::string profile;
};

void add_common(CLI::App *app, CommonOptions &o)
{
    app->add_option("--config", o.config_path, "JSON experiment file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--mode", o.mode, "labeling mode")->check(CLI::IsMember({"single", "multi"}));
    app->add_option("--slots", o.slots, "snapshots per trial (T)")->check(CLI::Range(2, 1000));
    app->add_option("--trials", o.trials, "trials per position")->check(CLI::PositiveNumber);
    app->add_option("--threads", o.threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    app->add_option("--out", o.out, "output directory");
    app->add_option("--profile", o.profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
}

ExperimentConfig resolve(const CommonOptions &o)
{
    ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (!o.profile.empty())
        apply_profile(c, profile_from_string(o.profile));
    if (o.seed)
        c.seed = *o.seed;
    if (!o.mode.empty())
        c.schedule.mode = labeling_mode_from_string(o.mode);
    if (o.slots)
        c.schedule.slots = *o.slots;
    if (o.trials)
        c.trials = *o.trials;
    if (o.threads)
        c.threads = *o.threads;
    c.validate();
    return c;
}

std::ofstream open_output(const fs::path &path)
{
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot write '" + path.string() + "'");
    return os;
}

class Run
{
public:
    Run(std::string command, const CommonOptions &o, ExperimentConfig config)
        : command_(std::move(command)), options_(o), config_(std::move(config)), start_(std::chrono::steady_clock::now())
    {
        fs::create_directories(options_.out);
    }

    const ExperimentConfig &config() const { return config_; }

    std::ofstream output(const std::string &name)
    {
        outputs_.push_back(name);
        return open_output(fs::path(options_.out) / name);
    }

    void finish(json extra = json::object())
    {
        json m;
        m["command"] = command_;
        m["version"] = RISLABEL_VERSION;
        m["profile"] = options_.profile.empty() ? "config" : options_.profile;
        m["config"] = config_to_json(config_);
        m["outputs"] = outputs_;
        m["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        for (auto it = extra.begin(); it != extra.end(); ++it)
            m[it.key()] = it.value();
        open_output(fs::path(options_.out) / "manifest.json") << m.dump(2) << '\n';
        std::cout << "wrote " << outputs_.size() << " file(s) and manifest.json to " << options_.out << '\n';
    }

private:
    std::string command_;
    CommonOptions options_;
    ExperimentConfig config_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<CsiSnapshot> read_snapshots(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open '" + path + "'");
    return read_snapshots_csv(is);
}

// Snapshot files fix T; the schedule follows them.
ExperimentConfig with_slots(ExperimentConfig c, std::size_t slots)
{
    c.schedule.slots = static_cast<int>(slots);
    c.validate();
    return c;
}

std::vector<Point2> sweep_positions(const ExperimentConfig &c)
{
    if (c.grid)
        return c.grid->positions();
    if (!c.positions.empty())
        return c.positions;
    throw ConfigError("no positions: set experiment.positions or experiment.grid");
}

void check_position(const ExperimentConfig &c, Point2 rx)
{
    ExperimentConfig probe = c;
    probe.positions = {rx};
    probe.grid.reset();
    probe.validate();
}

void write_bearings_csv(std::ostream &os, const Localization &loc)
{
    os << "anchor_x,anchor_y,aoa_rad,weight\n";
    os.precision(17);
    for (const auto &b : loc.bearings)
        os << b.anchor.x << ',' << b.anchor.y << ',' << b.aoa << ',' << b.weight << '\n';
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"rislabel: RIS multipath labeling simulator and estimator"};
    app.require_subcommand(1);

    CommonOptions sim_o, ext_o, loc_o, sw_o, cdf_o;
    std::vector<double> position;
    std::string ext_input, loc_input, metric;

    auto *sim = app.add_subcommand("simulate", "synthesize y(1..T) at one Rx position");
    add_common(sim, sim_o);
    sim->add_option("--position", position, "Rx position x y (m)")->expected(2);

    auto *ext = app.add_subcommand("extract", "extract and label paths from a snapshot table");
    add_common(ext, ext_o);
    ext->add_option("--input", ext_input, "snapshots.csv")->required()->check(CLI::ExistingFile);

    auto *loc = app.add_subcommand("locate", "estimate the Rx position from a snapshot table");
    add_common(loc, loc_o);
    auto *loc_in = loc->add_option("--input", loc_input, "snapshots.csv")->check(CLI::ExistingFile);
    loc->add_option("--position", position, "simulate one trial at this Rx position (x y) instead")
        ->expected(2)
        ->excludes(loc_in);

    auto *sw = app.add_subcommand("sweep", "Monte Carlo MAE over the configured positions or grid");
    add_common(sw, sw_o);

    auto *cd = app.add_subcommand("cdf", "empirical error CDFs at a fixed Rx position");
    add_common(cd, cdf_o);
    cd->add_option("--position", position, "Rx position x y; default: the configured positions")->expected(2);
    cd->add_option("--metric", metric, "ris<k> or localization; default: every RIS and localization");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sim)
        {
            Run run("simulate", sim_o, resolve(sim_o));
            const auto &c = run.config();
            Point2 rx{0.5 * (c.scene.plan.bounds.xmin + c.scene.plan.bounds.xmax),
                      0.5 * (c.scene.plan.bounds.ymin + c.scene.plan.bounds.ymax)};
            if (!position.empty())
                rx = {position[0], position[1]};
            else if (!c.positions.empty())
                rx = c.positions.front();
            check_position(c, rx);
            const Experiment exp(c);
            const Channel channel = make_channel(c.scene, c.radio, c.array, rx);
            {
                auto os = run.output("snapshots.csv");
                write_snapshots_csv(os, exp.simulate(channel, c.seed));
            }
            {
                auto os = run.output("channel_paths.csv");
                os.precision(17);
                os << "ris,aoa_rad,delay_s,gain_abs,reflections\n";
                for (const auto &p : channel.paths)
                    os << p.ris_tag << ',' << p.aoa << ',' << p.delay << ',' << std::abs(p.base_gain) << ','
                       << p.reflection_count << '\n';
            }
            run.finish({{"position", {rx.x, rx.y}},
                        {"snr_db", 10.0 * std::log10(aggregate_snr(channel, exp.schedule().phases_at(1)))}});
        }
        else if (*ext)
        {
            const auto snaps = read_snapshots(ext_input);
            Run run("extract", ext_o, with_slots(resolve(ext_o), snaps.size()));
            const Experiment exp(run.config());
            const auto labeled = exp.label(snaps);
            {
                auto os = run.output("paths.csv");
                write_labeled_csv(os, labeled);
            }
            run.finish({{"input", ext_input}, {"paths", labeled.size()}});
        }
        else if (*loc)
        {
            if (loc_input.empty() && position.empty())
                throw ConfigError("locate needs --input or --position");
            ExperimentConfig config = resolve(loc_o);
            std::vector<CsiSnapshot> snaps;
            std::optional<Point2> truth;
            if (!loc_input.empty())
            {
                snaps = read_snapshots(loc_input);
                config = with_slots(config, snaps.size());
            }
            Run run("locate", loc_o, config);
            const Experiment exp(run.config());
            if (!position.empty())
            {
                truth = Point2{position[0], position[1]};
                const auto &c = run.config();
                check_position(c, *truth);
                snaps = exp.simulate(make_channel(c.scene, c.radio, c.array, *truth), c.seed);
                {
                    auto os = run.output("snapshots.csv");
                    write_snapshots_csv(os, snaps);
                }
            }
            const Localization result = exp.locate(snaps);
            {
                auto os = run.output("paths.csv");
                write_labeled_csv(os, result.labeled);
            }
            {
                auto os = run.output("bearings.csv");
                write_bearings_csv(os, result);
            }
            json extra{{"bearings", result.bearings.size()}};
            if (!loc_input.empty())
                extra["input"] = loc_input;
            if (truth)
                extra["true_position"] = {truth->x, truth->y};
            if (result.position)
            {
                extra["position"] = {{"x", result.position->point.x},
                                     {"y", result.position->point.y},
                                     {"residual_m", result.position->residual},
                                     {"condition", result.position->condition}};
                if (truth)
                    extra["position_error_m"] = distance(result.position->point, *truth);
            }
            else
                extra["position"] = nullptr;
            run.finish(extra);
        }
        else if (*sw)
        {
            Run run("sweep", sw_o, resolve(sw_o));
            const auto res = sweep(run.config(), sweep_positions(run.config()));
            {
                auto os = run.output("heatmap.csv");
                write_heatmap_csv(os, res.rows, run.config().scene.ris.size());
            }
            {
                auto os = run.output("records.csv");
                write_records_csv(os, res.records);
            }
            run.finish({{"positions", res.rows.size()}});
        }
        else if (*cd)
        {
            Run run("cdf", cdf_o, resolve(cdf_o));
            std::vector<Point2> points = run.config().positions;
            if (!position.empty())
                points = {{position[0], position[1]}};
            if (points.empty())
                throw ConfigError("cdf needs --position or experiment.positions");
            const auto res = sweep(run.config(), points);
            std::vector<std::string> metrics;
            if (!metric.empty())
                metrics.push_back(metric);
            else
            {
                for (std::size_t k = 1; k <= run.config().scene.ris.size(); ++k)
                    metrics.push_back("ris" + std::to_string(k));
                metrics.push_back("localization");
            }
            for (const auto &m : metrics)
            {
                const auto values = metric_values(res.records, m);
                if (values.empty())
                    continue;
                {
                auto os = run.output("cdf_" + m + ".csv");
                write_cdf_csv(os, cdf(values));
            }
            }
            {
                auto os = run.output("records.csv");
                write_records_csv(os, res.records);
            }
            run.finish({{"metrics", metrics}});
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
