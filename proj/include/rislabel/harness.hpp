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

#ifndef RISLABEL_HARNESS_HPP
#define RISLABEL_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rislabel/association.hpp"
#include "rislabel/channel.hpp"
#include "rislabel/flipping.hpp"
#include "rislabel/localize.hpp"
#include "rislabel/mnomp.hpp"
#include "rislabel/scene.hpp"

namespace rislabel
{

struct ScheduleSpec
{
    LabelingMode mode = LabelingMode::single_labeling;
    int slots = 9;
    std::vector<double> base_phases;
    std::vector<double> increments;
    std::vector<PhaseSchedule::Entry> table; // explicit table overrides the generator

    PhaseSchedule build(int ris_count) const;
};

struct EstimatorSettings
{
    double oversampling = 4.0;
    double max_delay = 0.0; // 0: two room diagonals
    int max_paths = 16;
    double residual_factor = 0.0; // residual-energy stop, in units of the expected noise energy; 0 disables
    double false_alarm = 0.01;    // per-path detection test; 0 disables
    double min_gain_ratio = 1e-4;
    int cyclic_rounds = 3;
    bool localize = true;
    int tx_max_paths = 6;
    bool weight_by_gain = false; // bearing weights from |beta| and the Tx path gain
};

struct GridSpec
{
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    double step = 0.5;

    std::vector<Point2> positions() const;
};

struct ExperimentConfig
{
    Scene scene = default_scene();
    RadioConfig radio = RadioConfig::desk();
    RxArray array = RxArray::triangular();
    ScheduleSpec schedule;
    EstimatorSettings estimator;
    std::vector<Point2> positions;
    std::optional<GridSpec> grid;
    int trials = 100;
    std::uint64_t seed = 1;
    int threads = 0; // 0: hardware concurrency

    void validate() const;
};

enum class Profile
{
    desk,
    paper,
};

Profile profile_from_string(const std::string &name);

// desk: 128 tones, 100 trials, 0.5 m grid. paper: 1620 tones, 1000 trials.
void apply_profile(ExperimentConfig &config, Profile profile);

// Per-RIS outcome of one trial. Errors are radians in [0, pi].
struct RisOutcome
{
    double true_aoa = 0.0;
    double estimated_aoa = 0.0;
    double aoa_error = pi;
    bool found = false;
    int associated_paths = 0;
    int correctly_associated = 0;
};

struct TrialRecord
{
    Point2 position;
    std::size_t position_index = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::vector<RisOutcome> ris;
    double tx_aoa_error = std::numeric_limits<double>::quiet_NaN();
    double localization_error = std::numeric_limits<double>::quiet_NaN(); // m
    double snr_db = 0.0; // aggregate, first slot
};

// Labeled paths plus the bearings and position they imply.
struct Localization
{
    std::vector<LabeledPath> labeled;
    std::optional<ExtractedPath> tx; // earliest path of the first snapshot
    std::vector<BearingObservation> bearings; // RIS LoS paths, then Tx
    std::optional<PositionEstimate> position;
};

std::uint64_t trial_seed(std::uint64_t master, std::size_t position_index, int trial);

// Everything derived from the config that stays fixed across positions.
class Experiment
{
public:
    explicit Experiment(ExperimentConfig config);

    const ExperimentConfig &config() const { return config_; }
    const PhaseSchedule &schedule() const { return schedule_; }
    const Grid &grid() const { return grid_; }

    TrialRecord run_trial(Point2 position, std::uint64_t seed, std::size_t position_index = 0, int trial = 0) const;

    // Snapshots y(1..T) for one trial.
    std::vector<CsiSnapshot> simulate(const Channel &channel, std::uint64_t seed) const;

    // Extraction plus association on the deltas of y(1..T).
    std::vector<LabeledPath> label(const std::vector<CsiSnapshot> &snapshots) const;

    // Tx LoS estimate from the first snapshot; empty when nothing passes the stopping rule.
    std::optional<ExtractedPath> tx_path(const CsiSnapshot &first) const;

    // Labeling, Tx path and triangulation from y(1..T).
    Localization locate(const std::vector<CsiSnapshot> &snapshots) const;

    // All trials at one position, in trial order.
    std::vector<TrialRecord> run_position(Point2 position, std::size_t position_index) const;

private:
    ExperimentConfig config_;
    PhaseSchedule schedule_;
    Grid grid_;
};

TrialRecord run_trial(const ExperimentConfig &config, Point2 position, std::uint64_t seed);

// Mean wrapped AoA error per RIS, in degrees.
std::vector<double> mae(const std::vector<TrialRecord> &records);

// Mean of the finite localization errors (m); NaN when none.
double localization_mae(const std::vector<TrialRecord> &records);

// Empirical CDF: sorted distinct values with the fraction of samples <= value.
std::vector<std::pair<double, double>> cdf(std::vector<double> values);

// metric: "ris<k>" (AoA error of RIS k, degrees) or "localization" (m).
std::vector<double> metric_values(const std::vector<TrialRecord> &records, const std::string &metric);
std::vector<std::pair<double, double>> cdf(const std::vector<TrialRecord> &records, const std::string &metric);

struct HeatmapRow
{
    std::size_t index = 0;
    Point2 position;
    std::vector<double> mae_deg;
    double localization_mae = 0.0;
    int trials = 0;
};

struct SweepResult
{
    std::vector<HeatmapRow> rows;
    std::vector<TrialRecord> records;
};

// Runs every position of `positions` (grid index = position in the list) on a thread pool;
// rows come back in index order.
SweepResult sweep(const ExperimentConfig &config, const std::vector<Point2> &positions);
SweepResult sweep(const ExperimentConfig &config);

// Evaluates positions[i] with grid index indices[i]; matches the corresponding sweep rows.
SweepResult sweep_subset(const ExperimentConfig &config, const std::vector<Point2> &positions,
                         const std::vector<std::size_t> &indices);

void write_heatmap_csv(std::ostream &os, const std::vector<HeatmapRow> &rows, std::size_t ris_count);
void write_records_csv(std::ostream &os, const std::vector<TrialRecord> &records);
void write_cdf_csv(std::ostream &os, const std::vector<std::pair<double, double>> &points);

} // namespace rislabel

#endif
