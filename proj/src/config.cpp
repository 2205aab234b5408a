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

#include "rislabel/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "rislabel/errors.hpp"

namespace rislabel
{

using nlohmann::json;

namespace
{

constexpr double radians_per_degree = pi / 180.0;

void allow_keys(const json &j, const char *section, std::initializer_list<const char *> keys)
{
    if (!j.is_object())
        throw ConfigError(std::string(section) + " must be an object");
    for (const auto &item : j.items())
    {
        bool known = false;
        for (const char *k : keys)
            known = known || item.key() == k;
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in " + section);
    }
}

template <typename T>
void read(const json &j, const char *key, T &out)
{
    if (!j.contains(key))
        return;
    try
    {
        out = j.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

Point2 point(const json &j, const char *what)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(std::string(what) + " must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json point_json(Point2 p)
{
    return json::array({p.x, p.y});
}

// "orientation" in radians or "orientation_deg" in degrees.
void read_angle(const json &j, const char *key, double &out)
{
    read(j, key, out);
    const std::string deg = std::string(key) + "_deg";
    if (j.contains(deg))
    {
        double d = 0.0;
        read(j, deg.c_str(), d);
        out = d * radians_per_degree;
    }
}

Scene scene_from_json(const json &j)
{
    allow_keys(j, "scene", {"bounds", "walls", "tx", "ris", "max_reflections"});
    Scene scene = default_scene();
    if (j.contains("bounds"))
    {
        const auto &b = j.at("bounds");
        allow_keys(b, "scene.bounds", {"xmin", "ymin", "xmax", "ymax"});
        read(b, "xmin", scene.plan.bounds.xmin);
        read(b, "ymin", scene.plan.bounds.ymin);
        read(b, "xmax", scene.plan.bounds.xmax);
        read(b, "ymax", scene.plan.bounds.ymax);
        if (!j.contains("walls"))
            scene.plan = FloorPlan::rectangle(scene.plan.bounds);
    }
    if (j.contains("walls"))
    {
        scene.plan.walls.clear();
        for (const auto &w : j.at("walls"))
        {
            if (!w.is_array() || w.size() != 2)
                throw ConfigError("each wall must be [[x, y], [x, y]]");
            scene.plan.walls.push_back({point(w[0], "wall end"), point(w[1], "wall end")});
        }
    }
    if (j.contains("tx"))
        scene.tx = point(j.at("tx"), "scene.tx");
    if (j.contains("ris"))
    {
        scene.ris.clear();
        int index = 1;
        for (const auto &r : j.at("ris"))
        {
            allow_keys(r, "scene.ris",
                       {"name", "position", "orientation", "orientation_deg", "subsurfaces", "element_spacing"});
            RisAnchor a;
            a.name = "RIS" + std::to_string(index++);
            read(r, "name", a.name);
            if (!r.contains("position"))
                throw ConfigError("every RIS needs a position");
            a.position = point(r.at("position"), "ris.position");
            read_angle(r, "orientation", a.orientation);
            read(r, "subsurfaces", a.subsurface_count);
            read(r, "element_spacing", a.element_spacing);
            scene.ris.push_back(a);
        }
    }
    read(j, "max_reflections", scene.max_reflections);
    return scene;
}

RadioConfig radio_from_json(const json &j)
{
    allow_keys(j, "radio", {"carrier_frequency", "bandwidth", "subcarrier_spacing", "subcarriers",
                            "subcarrier_indices", "tx_power", "noise_level"});
    RadioConfig radio = RadioConfig::desk();
    read(j, "carrier_frequency", radio.carrier_frequency);
    read(j, "bandwidth", radio.bandwidth);
    read(j, "subcarrier_spacing", radio.subcarrier_spacing);
    read(j, "tx_power", radio.tx_power);
    read(j, "noise_level", radio.noise_level);
    if (j.contains("subcarrier_indices"))
        read(j, "subcarrier_indices", radio.subcarrier_indices);
    else if (j.contains("subcarriers") || j.contains("bandwidth") || j.contains("subcarrier_spacing"))
    {
        std::size_t count = radio.subcarrier_count();
        read(j, "subcarriers", count);
        if (!(radio.subcarrier_spacing > 0.0))
            throw ConfigError("subcarrier_spacing must be positive");
        try
        {
            radio.subcarrier_indices =
                RadioConfig::evenly_spaced_indices(count, radio.bandwidth, radio.subcarrier_spacing);
        }
        catch (const InvalidInput &e)
        {
            throw ConfigError(e.what());
        }
    }
    return radio;
}

RxArray array_from_json(const json &j)
{
    allow_keys(j, "rx_array", {"elements", "side", "orientation", "orientation_deg"});
    double side = 0.5;
    double orientation = 0.0;
    read(j, "side", side);
    read_angle(j, "orientation", orientation);
    RxArray array = RxArray::triangular(side, orientation);
    if (j.contains("elements"))
    {
        array.element_positions.clear();
        for (const auto &e : j.at("elements"))
            array.element_positions.push_back(point(e, "rx_array element"));
    }
    return array;
}

ScheduleSpec schedule_from_json(const json &j)
{
    allow_keys(j, "schedule", {"mode", "slots", "base_phases", "increments", "table"});
    ScheduleSpec s;
    if (j.contains("mode"))
        s.mode = labeling_mode_from_string(j.at("mode").get<std::string>());
    read(j, "slots", s.slots);
    read(j, "base_phases", s.base_phases);
    read(j, "increments", s.increments);
    if (j.contains("table"))
        for (const auto &e : j.at("table"))
        {
            allow_keys(e, "schedule.table", {"ris", "slot", "phase"});
            PhaseSchedule::Entry entry{0, 0, 0.0};
            read(e, "ris", entry.ris);
            read(e, "slot", entry.slot);
            read(e, "phase", entry.phase);
            s.table.push_back(entry);
        }
    return s;
}

EstimatorSettings estimator_from_json(const json &j)
{
    allow_keys(j, "estimator", {"oversampling", "max_delay", "max_paths", "residual_factor", "false_alarm", "min_gain_ratio",
                                "cyclic_rounds", "localize", "tx_max_paths", "weight_by_gain"});
    EstimatorSettings e;
    read(j, "oversampling", e.oversampling);
    read(j, "max_delay", e.max_delay);
    read(j, "max_paths", e.max_paths);
    read(j, "residual_factor", e.residual_factor);
    read(j, "false_alarm", e.false_alarm);
    read(j, "min_gain_ratio", e.min_gain_ratio);
    read(j, "cyclic_rounds", e.cyclic_rounds);
    read(j, "localize", e.localize);
    read(j, "tx_max_paths", e.tx_max_paths);
    read(j, "weight_by_gain", e.weight_by_gain);
    return e;
}

void experiment_from_json(const json &j, ExperimentConfig &config)
{
    allow_keys(j, "experiment", {"trials", "seed", "threads", "positions", "grid"});
    read(j, "trials", config.trials);
    read(j, "seed", config.seed);
    read(j, "threads", config.threads);
    if (j.contains("positions"))
        for (const auto &p : j.at("positions"))
            config.positions.push_back(point(p, "experiment position"));
    if (j.contains("grid"))
    {
        const auto &g = j.at("grid");
        allow_keys(g, "experiment.grid", {"x_min", "x_max", "y_min", "y_max", "step"});
        GridSpec spec;
        read(g, "x_min", spec.x_min);
        read(g, "x_max", spec.x_max);
        read(g, "y_min", spec.y_min);
        read(g, "y_max", spec.y_max);
        read(g, "step", spec.step);
        config.grid = spec;
    }
}

} // namespace

ExperimentConfig config_from_json(const json &j)
{
    allow_keys(j, "config", {"scene", "radio", "rx_array", "schedule", "estimator", "experiment"});
    ExperimentConfig config;
    try
    {
        if (j.contains("scene"))
            config.scene = scene_from_json(j.at("scene"));
        if (j.contains("radio"))
            config.radio = radio_from_json(j.at("radio"));
        if (j.contains("rx_array"))
            config.array = array_from_json(j.at("rx_array"));
        if (j.contains("schedule"))
            config.schedule = schedule_from_json(j.at("schedule"));
        if (j.contains("estimator"))
            config.estimator = estimator_from_json(j.at("estimator"));
        if (j.contains("experiment"))
            experiment_from_json(j.at("experiment"), config);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(e.what());
    }
    return config;
}

json config_to_json(const ExperimentConfig &config)
{
    json j;
    const auto &sc = config.scene;
    json walls = json::array();
    for (const auto &w : sc.plan.walls)
        walls.push_back(json::array({point_json(w.a), point_json(w.b)}));
    json ris = json::array();
    for (const auto &r : sc.ris)
        ris.push_back({{"name", r.name},
                       {"position", point_json(r.position)},
                       {"orientation", r.orientation},
                       {"subsurfaces", r.subsurface_count},
                       {"element_spacing", r.element_spacing}});
    j["scene"] = {{"bounds",
                   {{"xmin", sc.plan.bounds.xmin},
                    {"ymin", sc.plan.bounds.ymin},
                    {"xmax", sc.plan.bounds.xmax},
                    {"ymax", sc.plan.bounds.ymax}}},
                  {"walls", walls},
                  {"tx", point_json(sc.tx)},
                  {"ris", ris},
                  {"max_reflections", sc.max_reflections}};

    const auto &r = config.radio;
    j["radio"] = {{"carrier_frequency", r.carrier_frequency},
                  {"bandwidth", r.bandwidth},
                  {"subcarrier_spacing", r.subcarrier_spacing},
                  {"subcarrier_indices", r.subcarrier_indices},
                  {"tx_power", r.tx_power},
                  {"noise_level", r.noise_level}};

    json elements = json::array();
    for (const auto &p : config.array.element_positions)
        elements.push_back(point_json(p));
    j["rx_array"] = {{"elements", elements}};

    const auto &s = config.schedule;
    json table = json::array();
    for (const auto &e : s.table)
        table.push_back({{"ris", e.ris}, {"slot", e.slot}, {"phase", e.phase}});
    j["schedule"] = {{"mode", to_string(s.mode)}, {"slots", s.slots}, {"base_phases", s.base_phases},
                     {"increments", s.increments}, {"table", table}};

    const auto &e = config.estimator;
    j["estimator"] = {{"oversampling", e.oversampling},       {"max_delay", e.max_delay},
                      {"max_paths", e.max_paths},             {"residual_factor", e.residual_factor},
                      {"false_alarm", e.false_alarm},
                      {"min_gain_ratio", e.min_gain_ratio},   {"cyclic_rounds", e.cyclic_rounds},
                      {"localize", e.localize},               {"tx_max_paths", e.tx_max_paths},
                      {"weight_by_gain", e.weight_by_gain}};

    json positions = json::array();
    for (const auto &p : config.positions)
        positions.push_back(point_json(p));
    json exp = {{"trials", config.trials}, {"seed", config.seed}, {"threads", config.threads},
                {"positions", positions}};
    if (config.grid)
        exp["grid"] = {{"x_min", config.grid->x_min},
                       {"x_max", config.grid->x_max},
                       {"y_min", config.grid->y_min},
                       {"y_max", config.grid->y_max},
                       {"step", config.grid->step}};
    j["experiment"] = exp;
    return j;
}

ExperimentConfig parse_config(const std::string &text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ------------------------------------------------------------------------
// CSV

namespace
{

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_snapshots_csv(std::ostream &os, const std::vector<CsiSnapshot> &snapshots)
{
    os << "t,index,re,im\n";
    for (const auto &s : snapshots)
        for (std::size_t i = 0; i < s.data.size(); ++i)
            os << s.t << ',' << i << ',' << num(s.data[i].real()) << ',' << num(s.data[i].imag()) << '\n';
}

std::vector<CsiSnapshot> read_snapshots_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,index,re,im", 0) != 0)
        throw ConfigError("snapshot table needs the header t,index,re,im");
    std::vector<CsiSnapshot> out;
    std::size_t row = 1;
    while (std::getline(is, line))
    {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        int t = 0;
        std::size_t index = 0;
        double re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%d,%zu,%lf,%lf", &t, &index, &re, &im) != 4)
            throw ConfigError("malformed snapshot row " + std::to_string(row));
        if (out.empty() || out.back().t != t)
        {
            for (const auto &s : out)
                if (s.t == t)
                    throw ConfigError("slot " + std::to_string(t) + " is not contiguous");
            out.push_back({t, {}});
        }
        if (index != out.back().data.size())
            throw ConfigError("snapshot entries out of order at row " + std::to_string(row));
        out.back().data.emplace_back(re, im);
    }
    for (const auto &s : out)
        if (s.data.size() != out.front().data.size())
            throw ConfigError("snapshots differ in length");
    return out;
}

void write_paths_csv(std::ostream &os, const std::vector<ExtractedPath> &paths)
{
    os << "path,detection_order,aoa_rad,delay_s,slot,gain_re,gain_im\n";
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (const auto &[t, g] : paths[i].gains)
            os << i << ',' << paths[i].detection_order << ',' << num(paths[i].aoa) << ',' << num(paths[i].delay)
               << ',' << t << ',' << num(g.real()) << ',' << num(g.imag()) << '\n';
}

void write_labeled_csv(std::ostream &os, const std::vector<LabeledPath> &paths)
{
    os << "path,ris,los,aoa_rad,aoa_deg,delay_s,beta_re,beta_im,beta_abs,score\n";
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const auto &p = paths[i];
        os << i << ',' << p.ris_id << ',' << (p.is_los ? 1 : 0) << ',' << num(p.base.aoa) << ','
           << num(p.base.aoa * 180.0 / pi) << ',' << num(p.base.delay) << ',' << num(p.beta.real()) << ','
           << num(p.beta.imag()) << ',' << num(std::abs(p.beta)) << ',' << num(p.association_score) << '\n';
    }
}

} // namespace rislabel
