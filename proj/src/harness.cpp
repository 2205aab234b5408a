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

#include "rislabel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "rislabel/errors.hpp"

namespace rislabel
{

namespace
{

constexpr double degrees = 180.0 / pi;

std::string format_number(double value, int digits = 17)
{
    if (std::isnan(value))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

} // namespace

// ------------------------------------------------------------------------
// Configuration

PhaseSchedule ScheduleSpec::build(int ris_count) const
{
    if (!table.empty())
        return PhaseSchedule(mode, ris_count, slots, table);
    return make_schedule(mode, ris_count, slots, base_phases, increments);
}

std::vector<Point2> GridSpec::positions() const
{
    if (!(step > 0.0) || x_max < x_min || y_max < y_min)
        throw ConfigError("grid spec needs a positive step and ordered limits");
    const auto nx = static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
    const auto ny = static_cast<std::size_t>(std::floor((y_max - y_min) / step + 1e-9)) + 1;
    std::vector<Point2> out;
    out.reserve(nx * ny);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix)
            out.push_back({x_min + step * static_cast<double>(ix), y_min + step * static_cast<double>(iy)});
    return out;
}

void ExperimentConfig::validate() const
{
    scene.validate();
    radio.validate();
    array.validate();
    if (scene.ris.empty())
        throw ConfigError("the scene needs at least one RIS");
    if (trials < 1)
        throw ConfigError("trials must be at least 1");
    if (estimator.max_paths < 1 || estimator.tx_max_paths < 1 || estimator.cyclic_rounds < 0)
        throw ConfigError("estimator path limits must be positive");
    if (!(estimator.oversampling > 0.0) || !(estimator.residual_factor >= 0.0) || !(estimator.min_gain_ratio >= 0.0) ||
        !(estimator.false_alarm >= 0.0 && estimator.false_alarm < 1.0))
        throw ConfigError("estimator factors must be non-negative");
    auto check_rx = [this](Point2 p, const char *what) {
        if (!scene.plan.bounds.strictly_contains(p))
            throw ConfigError(std::string(what) + " lies outside the floorplan");
        bool on_anchor = distance(p, scene.tx) < 1e-9;
        for (const auto &r : scene.ris)
            on_anchor = on_anchor || distance(p, r.position) < 1e-9;
        if (on_anchor)
            throw ConfigError(std::string(what) + " (" + format_number(p.x, 6) + ", " + format_number(p.y, 6) +
                              ") coincides with the Tx or a RIS");
    };
    for (const auto &p : positions)
        check_rx(p, "Rx position");
    if (grid)
        for (const auto &p : grid->positions())
            check_rx(p, "grid position");
}

Profile profile_from_string(const std::string &name)
{
    if (name == "desk")
        return Profile::desk;
    if (name == "paper")
        return Profile::paper;
    throw ConfigError("unknown profile '" + name + "'");
}

void apply_profile(ExperimentConfig &config, Profile profile)
{
    const std::size_t tones = profile == Profile::desk ? 128 : 1620;
    config.radio.subcarrier_indices =
        RadioConfig::evenly_spaced_indices(tones, config.radio.bandwidth, config.radio.subcarrier_spacing);
    config.trials = profile == Profile::desk ? 100 : 1000;
    if (config.grid)
        config.grid->step = 0.5;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t position_index, int trial)
{
    return mix_seed(mix_seed(master, static_cast<std::uint64_t>(position_index)), static_cast<std::uint64_t>(trial));
}

// ------------------------------------------------------------------------
// Experiment

namespace
{

Grid make_grid(const ExperimentConfig &config)
{
    const double max_delay = config.estimator.max_delay > 0.0 ? config.estimator.max_delay
                                                              : default_max_delay(config.scene.plan.bounds);
    return Grid::standard(config.array, config.radio, max_delay, config.estimator.oversampling);
}

const ExperimentConfig &validated(const ExperimentConfig &config)
{
    config.validate();
    return config;
}

} // namespace

Experiment::Experiment(ExperimentConfig config)
    : config_(std::move(validated(config))),
      schedule_(config_.schedule.build(static_cast<int>(config_.scene.ris.size()))),
      grid_(make_grid(config_))
{
}

std::vector<CsiSnapshot> Experiment::simulate(const Channel &channel, std::uint64_t seed) const
{
    std::vector<std::vector<double>> phases;
    for (int t = 1; t <= schedule_.slots(); ++t)
        phases.push_back(schedule_.phases_at(t));
    return synthesize_slots(channel, phases, seed);
}

std::vector<LabeledPath> Experiment::label(const std::vector<CsiSnapshot> &snapshots) const
{
    if (snapshots.size() < 2)
        throw InvalidInput("labeling needs at least two snapshots");
    const auto &est = config_.estimator;
    const std::size_t dim = snapshots.front().data.size();

    SlotData deltas;
    for (std::size_t i = 1; i < snapshots.size(); ++i)
        deltas[snapshots[i].t] = delta(snapshots[i], snapshots[0]).data;

    auto rule_for = [&](std::size_t slot_count) {
        StoppingRule rule = StoppingRule::noise_referenced(config_.radio.noise_level, dim, slot_count,
                                                           est.residual_factor, est.max_paths);
        rule.min_gain_ratio = est.min_gain_ratio;
        if (est.false_alarm > 0.0)
            rule.detection_threshold = StoppingRule::detection_energy(
                4.0 * config_.radio.noise_level * config_.radio.noise_level, dim, slot_count, est.false_alarm);
        return rule;
    };

    std::vector<ExtractedPath> extracted;
    if (schedule_.mode() == LabelingMode::single_labeling && schedule_.ris_count() > 1)
    {
        for (int k = 1; k <= schedule_.ris_count(); ++k)
        {
            SlotData subset;
            for (int t : schedule_.active_slots(k))
                if (auto it = deltas.find(t); it != deltas.end())
                    subset.insert(*it);
            if (subset.empty())
                continue;
            auto paths = extract(subset, grid_, rule_for(subset.size()), est.cyclic_rounds);
            extracted.insert(extracted.end(), paths.begin(), paths.end());
        }
    }
    else
    {
        extracted = extract(deltas, grid_, rule_for(deltas.size()), est.cyclic_rounds);
    }
    return associate(extracted, schedule_);
}

std::optional<ExtractedPath> Experiment::tx_path(const CsiSnapshot &first) const
{
    const auto &est = config_.estimator;
    StoppingRule rule;
    rule.max_paths = est.tx_max_paths;
    rule.min_gain_ratio = est.min_gain_ratio;
    const double sigma2 = config_.radio.noise_level * config_.radio.noise_level;
    rule.residual_threshold = est.residual_factor * 2.0 * sigma2 * static_cast<double>(first.data.size());
    if (est.false_alarm > 0.0)
        rule.detection_threshold = StoppingRule::detection_energy(2.0 * sigma2, first.data.size(), 1, est.false_alarm);
    try
    {
        return extract_tx_path(first.data, grid_, rule, 1);
    }
    catch (const NoPathsFound &)
    {
        return std::nullopt;
    }
}

Localization Experiment::locate(const std::vector<CsiSnapshot> &snapshots) const
{
    Localization loc;
    loc.labeled = label(snapshots);
    const bool by_gain = config_.estimator.weight_by_gain;
    for (const auto &lp : loc.labeled)
        if (lp.is_los)
            loc.bearings.push_back({config_.scene.ris.at(static_cast<std::size_t>(lp.ris_id - 1)).position,
                                    lp.base.aoa, by_gain ? std::abs(lp.beta) : 1.0});
    loc.tx = tx_path(snapshots.front());
    if (loc.tx)
        loc.bearings.push_back({config_.scene.tx, loc.tx->aoa, by_gain ? std::abs(loc.tx->gains.at(1)) : 1.0});
    if (loc.bearings.size() >= 2)
    {
        try
        {
            loc.position = triangulate(loc.bearings);
        }
        catch (const DegenerateGeometry &)
        {
        }
    }
    return loc;
}

TrialRecord Experiment::run_trial(Point2 position, std::uint64_t seed, std::size_t position_index, int trial) const
{
    const Channel channel = make_channel(config_.scene, config_.radio, config_.array, position);
    const auto snaps = simulate(channel, seed);
    Localization loc;
    if (config_.estimator.localize)
        loc = locate(snaps);
    else
        loc.labeled = label(snaps);

    TrialRecord rec;
    rec.position = position;
    rec.position_index = position_index;
    rec.trial = trial;
    rec.seed = seed;
    rec.snr_db = 10.0 * std::log10(aggregate_snr(channel, schedule_.phases_at(1)));

    const std::size_t n_ris = config_.scene.ris.size();
    const double bandwidth = config_.radio.bandwidth;
    const double norm2 = static_cast<double>(channel.dimension());
    rec.ris.resize(n_ris);
    for (std::size_t k = 0; k < n_ris; ++k)
        rec.ris[k].true_aoa = wrap_2pi(bearing(position, config_.scene.ris[k].position));

    for (const auto &lp : loc.labeled)
    {
        auto &out = rec.ris.at(static_cast<std::size_t>(lp.ris_id - 1));
        if (lp.is_los)
        {
            out.found = true;
            out.estimated_aoa = lp.base.aoa;
            out.aoa_error = angle_distance(lp.base.aoa, out.true_aoa);
        }
        // ground truth: the RIS path whose atom overlaps most with the estimate, weighted by strength
        const CVector v_est = grid_.model.atom(lp.base.aoa, lp.base.delay);
        const PropagationPath *match = nullptr;
        double best = 0.0;
        for (const auto &p : channel.paths)
        {
            if (p.ris_tag == 0 || std::abs(p.delay - lp.base.delay) > 2.0 / bandwidth)
                continue;
            const double overlap = std::abs(grid_.model.correlate(v_est, p.aoa, p.delay)) / norm2;
            const double strength = overlap * std::abs(p.base_gain *
                                                       ris_array_factor(channel.ris[p.ris_tag - 1], p.incident_angle,
                                                                        p.reflect_angle));
            if (overlap >= 0.5 && strength > best)
            {
                best = strength;
                match = &p;
            }
        }
        if (match)
        {
            out.associated_paths += 1;
            if (match->ris_tag == lp.ris_id)
                out.correctly_associated += 1;
        }
    }

    if (loc.tx)
        rec.tx_aoa_error = angle_distance(loc.tx->aoa, wrap_2pi(bearing(position, config_.scene.tx)));
    if (loc.position)
        rec.localization_error = distance(loc.position->point, position);
    return rec;
}

std::vector<TrialRecord> Experiment::run_position(Point2 position, std::size_t position_index) const
{
    std::vector<TrialRecord> out;
    out.reserve(static_cast<std::size_t>(config_.trials));
    for (int trial = 0; trial < config_.trials; ++trial)
        out.push_back(run_trial(position, trial_seed(config_.seed, position_index, trial), position_index, trial));
    return out;
}

TrialRecord run_trial(const ExperimentConfig &config, Point2 position, std::uint64_t seed)
{
    return Experiment(config).run_trial(position, seed);
}

// ------------------------------------------------------------------------
// Metrics

std::vector<double> mae(const std::vector<TrialRecord> &records)
{
    if (records.empty())
        throw InvalidInput("MAE needs at least one record");
    std::vector<double> sum(records.front().ris.size(), 0.0);
    for (const auto &r : records)
        for (std::size_t k = 0; k < sum.size(); ++k)
            sum[k] += r.ris.at(k).aoa_error;
    for (auto &s : sum)
        s = s / static_cast<double>(records.size()) * degrees;
    return sum;
}

double localization_mae(const std::vector<TrialRecord> &records)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &r : records)
        if (std::isfinite(r.localization_error))
        {
            sum += r.localization_error;
            ++n;
        }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

std::vector<std::pair<double, double>> cdf(std::vector<double> values)
{
    if (values.empty())
        throw InvalidInput("CDF needs at least one value");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (i + 1 == values.size() || values[i + 1] != values[i])
            out.emplace_back(values[i], static_cast<double>(i + 1) / n);
    return out;
}

std::vector<double> metric_values(const std::vector<TrialRecord> &records, const std::string &metric)
{
    std::vector<double> values;
    if (metric == "localization")
    {
        for (const auto &r : records)
            if (std::isfinite(r.localization_error))
                values.push_back(r.localization_error);
        return values;
    }
    if (metric.rfind("ris", 0) == 0)
    {
        const int k = std::stoi(metric.substr(3));
        for (const auto &r : records)
        {
            if (k < 1 || static_cast<std::size_t>(k) > r.ris.size())
                throw InvalidInput("metric '" + metric + "' names an unknown RIS");
            values.push_back(r.ris[static_cast<std::size_t>(k - 1)].aoa_error * degrees);
        }
        return values;
    }
    throw InvalidInput("unknown metric '" + metric + "'");
}

std::vector<std::pair<double, double>> cdf(const std::vector<TrialRecord> &records, const std::string &metric)
{
    return cdf(metric_values(records, metric));
}

// ------------------------------------------------------------------------
// Sweeps

SweepResult sweep_subset(const ExperimentConfig &config, const std::vector<Point2> &positions,
                         const std::vector<std::size_t> &indices)
{
    if (positions.size() != indices.size())
        throw InvalidInput("positions and indices differ in length");
    const Experiment experiment(config);
    std::vector<std::vector<TrialRecord>> per_position(positions.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < positions.size(); i = next++)
        {
            try
            {
                per_position[i] = experiment.run_position(positions[i], indices[i]);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(positions.size(), 1)));
    if (n_threads <= 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepResult result;
    for (std::size_t i = 0; i < positions.size(); ++i)
    {
        HeatmapRow row;
        row.index = indices[i];
        row.position = positions[i];
        row.mae_deg = mae(per_position[i]);
        row.localization_mae = localization_mae(per_position[i]);
        row.trials = static_cast<int>(per_position[i].size());
        result.rows.push_back(std::move(row));
        result.records.insert(result.records.end(), per_position[i].begin(), per_position[i].end());
    }
    return result;
}

SweepResult sweep(const ExperimentConfig &config, const std::vector<Point2> &positions)
{
    std::vector<std::size_t> indices(positions.size());
    for (std::size_t i = 0; i < indices.size(); ++i)
        indices[i] = i;
    return sweep_subset(config, positions, indices);
}

SweepResult sweep(const ExperimentConfig &config)
{
    if (!config.grid)
        throw ConfigError("sweep needs a grid spec");
    return sweep(config, config.grid->positions());
}

// ------------------------------------------------------------------------
// CSV

void write_heatmap_csv(std::ostream &os, const std::vector<HeatmapRow> &rows, std::size_t ris_count)
{
    os << "index,x,y";
    for (std::size_t k = 1; k <= ris_count; ++k)
        os << ",mae_ris" << k << "_deg";
    os << ",localization_mae_m,trials\n";
    for (const auto &row : rows)
    {
        os << row.index << ',' << format_number(row.position.x) << ',' << format_number(row.position.y);
        for (double m : row.mae_deg)
            os << ',' << format_number(m);
        os << ',' << format_number(row.localization_mae) << ',' << row.trials << '\n';
    }
}

void write_records_csv(std::ostream &os, const std::vector<TrialRecord> &records)
{
    const std::size_t ris_count = records.empty() ? 0 : records.front().ris.size();
    os << "position_index,x,y,trial,seed";
    for (std::size_t k = 1; k <= ris_count; ++k)
        os << ",true_aoa_ris" << k << "_deg,est_aoa_ris" << k << "_deg,aoa_error_ris" << k << "_deg,found_ris" << k
           << ",associated_ris" << k << ",associated_correct_ris" << k;
    os << ",tx_aoa_error_deg,localization_error_m,snr_db\n";
    for (const auto &r : records)
    {
        os << r.position_index << ',' << format_number(r.position.x) << ',' << format_number(r.position.y) << ','
           << r.trial << ',' << r.seed;
        for (const auto &o : r.ris)
            os << ',' << format_number(o.true_aoa * degrees) << ','
               << (o.found ? format_number(o.estimated_aoa * degrees) : std::string("nan")) << ','
               << format_number(o.aoa_error * degrees) << ',' << (o.found ? 1 : 0) << ',' << o.associated_paths << ','
               << o.correctly_associated;
        os << ',' << format_number(r.tx_aoa_error * degrees) << ',' << format_number(r.localization_error) << ','
           << format_number(r.snr_db, 6) << '\n';
    }
}

void write_cdf_csv(std::ostream &os, const std::vector<std::pair<double, double>> &points)
{
    os << "value,fraction\n";
    for (const auto &[v, f] : points)
        os << format_number(v) << ',' << format_number(f) << '\n';
}

} // namespace rislabel
