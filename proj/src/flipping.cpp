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

#include "rislabel/flipping.hpp"

#include <cmath>
#include <limits>

#include "rislabel/errors.hpp"

namespace rislabel
{

namespace
{

// |delta gamma| below this counts as "held".
constexpr double toggle_floor = 1e-9;
constexpr double ratio_separation = 1e-6;

} // namespace

std::string to_string(LabelingMode mode)
{
    return mode == LabelingMode::single_labeling ? "single" : "multi";
}

LabelingMode labeling_mode_from_string(const std::string &name)
{
    if (name == "single" || name == "single_labeling")
        return LabelingMode::single_labeling;
    if (name == "multi" || name == "multi_labeling")
        return LabelingMode::multi_labeling;
    throw ConfigError("unknown labeling mode '" + name + "'");
}

PhaseSchedule::PhaseSchedule(LabelingMode mode, int ris_count, int slots, const std::vector<Entry> &table)
    : mode_(mode), ris_count_(ris_count), slots_(slots)
{
    if (ris_count < 1)
        throw ConfigError("schedule needs at least one RIS");
    if (slots < 2)
        throw ConfigError("schedule needs at least two slots");

    const double unset = std::numeric_limits<double>::quiet_NaN();
    phases_.assign(static_cast<std::size_t>(slots), std::vector<double>(static_cast<std::size_t>(ris_count), unset));
    for (const auto &e : table)
    {
        if (e.ris < 1 || e.ris > ris_count || e.slot < 1 || e.slot > slots)
            throw ConfigError("schedule entry (k=" + std::to_string(e.ris) + ", t=" + std::to_string(e.slot) +
                              ") out of range");
        if (!std::isfinite(e.phase))
            throw ConfigError("schedule phase must be finite");
        phases_[static_cast<std::size_t>(e.slot - 1)][static_cast<std::size_t>(e.ris - 1)] = e.phase;
    }
    for (int t = 1; t <= slots; ++t)
        for (int k = 1; k <= ris_count; ++k)
            if (std::isnan(phase(k, t)))
                throw ConfigError("schedule misses phase for RIS " + std::to_string(k) + " at slot " +
                                  std::to_string(t));

    active_.assign(static_cast<std::size_t>(ris_count), {});
    for (int k = 1; k <= ris_count; ++k)
        for (int t = 2; t <= slots; ++t)
            if (std::abs(delta_gamma(*this, k, t)) > toggle_floor)
                active_[static_cast<std::size_t>(k - 1)].push_back(t);

    validate();
}

double PhaseSchedule::phase(int ris, int slot) const
{
    return phases_.at(static_cast<std::size_t>(slot - 1)).at(static_cast<std::size_t>(ris - 1));
}

const std::vector<double> &PhaseSchedule::phases_at(int slot) const
{
    return phases_.at(static_cast<std::size_t>(slot - 1));
}

std::vector<int> PhaseSchedule::active_ris(int slot) const
{
    std::vector<int> out;
    if (slot < 2)
        return out;
    for (int k = 1; k <= ris_count_; ++k)
        if (std::abs(delta_gamma(*this, k, slot)) > toggle_floor)
            out.push_back(k);
    return out;
}

std::vector<PhaseSchedule::Entry> PhaseSchedule::table() const
{
    std::vector<Entry> out;
    for (int t = 1; t <= slots_; ++t)
        for (int k = 1; k <= ris_count_; ++k)
            out.push_back({k, t, phase(k, t)});
    return out;
}

void PhaseSchedule::validate() const
{
    if (mode_ == LabelingMode::single_labeling)
    {
        for (int t = 2; t <= slots_; ++t)
            if (active_ris(t).size() != 1)
                throw ConfigError("single-labeling schedule must toggle exactly one RIS at slot " +
                                  std::to_string(t));
        return;
    }

    for (int k = 1; k <= ris_count_; ++k)
        if (static_cast<int>(active_slots(k).size()) != slots_ - 1)
            throw ConfigError("multi-labeling schedule leaves RIS " + std::to_string(k) +
                              " with a zero phase step in some slot");
    if (ris_count_ == 1)
        return;
    if (slots_ < 3)
        throw ConfigError("multi-labeling with several RISs needs at least three slots");

    auto ratios = [this](int k) {
        std::vector<cplx> r;
        for (int t = 2; t < slots_; ++t)
            r.push_back(delta_gamma(*this, k, t) / delta_gamma(*this, k, t + 1));
        return r;
    };
    for (int a = 1; a <= ris_count_; ++a)
        for (int b = a + 1; b <= ris_count_; ++b)
        {
            const auto ra = ratios(a);
            const auto rb = ratios(b);
            double separation = 0.0;
            for (std::size_t i = 0; i < ra.size(); ++i)
                separation += std::abs(ra[i] - rb[i]);
            if (separation < ratio_separation)
                throw ConfigError("RIS " + std::to_string(a) + " and RIS " + std::to_string(b) +
                                  " share the same phase-ratio signature");
        }
}

PhaseSchedule make_schedule(LabelingMode mode, int ris_count, int slots, const std::vector<double> &base_phases,
                            const std::vector<double> &increments)
{
    if (ris_count < 1)
        throw ConfigError("schedule needs at least one RIS");
    if (slots < 2)
        throw ConfigError("schedule needs at least two slots");
    std::vector<double> base = base_phases;
    if (base.empty())
        base.assign(static_cast<std::size_t>(ris_count), 0.0);
    if (static_cast<int>(base.size()) != ris_count)
        throw ConfigError("base phase count does not match the RIS count");

    std::vector<PhaseSchedule::Entry> table;
    const bool round_robin = mode == LabelingMode::single_labeling || ris_count == 1;
    if (round_robin)
    {
        for (int k = 1; k <= ris_count; ++k)
            table.push_back({k, 1, base[k - 1]});
        for (int t = 2; t <= slots; ++t)
        {
            const int active = (t - 2) % ris_count + 1;
            for (int k = 1; k <= ris_count; ++k)
                table.push_back({k, t, base[k - 1] + (k == active ? pi : 0.0)});
        }
        return PhaseSchedule(mode, ris_count, slots, table);
    }

    std::vector<double> inc = increments;
    if (inc.empty())
    {
        const int denominator = ris_count % 2 == 0 ? ris_count + 1 : ris_count + 2;
        for (int k = 1; k <= ris_count; ++k)
            inc.push_back(two_pi * k / denominator);
    }
    if (static_cast<int>(inc.size()) != ris_count)
        throw ConfigError("increment count does not match the RIS count");
    for (int t = 1; t <= slots; ++t)
    {
        const int multiple = t == 1 ? 0 : (t % 2 == 0 ? 1 : 2);
        for (int k = 1; k <= ris_count; ++k)
            table.push_back({k, t, base[k - 1] + multiple * inc[k - 1]});
    }
    return PhaseSchedule(mode, ris_count, slots, table);
}

cplx delta_gamma(const PhaseSchedule &schedule, int ris, int slot)
{
    return std::polar(1.0, schedule.phase(ris, slot)) - std::polar(1.0, schedule.phase(ris, 1));
}

DeltaSnapshot delta(const CsiSnapshot &y_t, const CsiSnapshot &y_1)
{
    if (y_t.data.size() != y_1.data.size())
        throw InvalidInput("snapshot dimensions differ");
    DeltaSnapshot d;
    d.t = y_t.t;
    d.data.resize(y_t.data.size());
    for (std::size_t i = 0; i < d.data.size(); ++i)
        d.data[i] = y_t.data[i] - y_1.data[i];
    return d;
}

DeltaSnapshot delta(const CsiSnapshot &y_t, const CsiSnapshot &y_1, const PhaseSchedule &schedule)
{
    DeltaSnapshot d = delta(y_t, y_1);
    d.active_ris = schedule.active_ris(y_t.t);
    return d;
}

} // namespace rislabel
