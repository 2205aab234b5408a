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

#include "rislabel/association.hpp"

#include <cmath>
#include <limits>

#include "rislabel/errors.hpp"

namespace rislabel
{

namespace
{

constexpr double ratio_floor = 1e-3;
constexpr double zero_step = 1e-12;

std::vector<int> slots_of(const ExtractedPath &path)
{
    std::vector<int> slots;
    for (const auto &[t, g] : path.gains)
        slots.push_back(t);
    return slots;
}

} // namespace

cplx estimate_beta(const ExtractedPath &path, const PhaseSchedule &schedule, int ris)
{
    if (path.gains.empty())
        throw InvalidInput("path carries no gains");
    cplx sum{0.0, 0.0};
    for (const auto &[t, gain] : path.gains)
    {
        const cplx step = delta_gamma(schedule, ris, t);
        if (std::abs(step) <= zero_step)
            throw ConfigError("RIS " + std::to_string(ris) + " has a zero phase step at slot " + std::to_string(t));
        sum += gain / step;
    }
    return sum / static_cast<double>(path.gains.size());
}

std::size_t select_los(const std::vector<LabeledPath> &paths)
{
    if (paths.empty())
        throw InvalidInput("LoS selection needs at least one path");
    std::size_t best = 0;
    for (std::size_t i = 1; i < paths.size(); ++i)
    {
        const double a = std::abs(paths[i].beta);
        const double b = std::abs(paths[best].beta);
        if (a > b || (a == b && paths[i].base.delay < paths[best].base.delay))
            best = i;
    }
    return best;
}

std::vector<cplx> ratio_signature(const ExtractedPath &path)
{
    if (path.gains.size() < 2)
        throw Undecidable("ratio signature needs gains on at least two slots");
    double largest = 0.0;
    for (const auto &[t, g] : path.gains)
        largest = std::max(largest, std::abs(g));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<cplx> ratios;
    bool any = false;
    for (auto it = path.gains.begin(), next = std::next(it); next != path.gains.end(); ++it, ++next)
    {
        if (std::abs(next->second) <= ratio_floor * largest)
        {
            ratios.emplace_back(nan, nan);
            continue;
        }
        ratios.push_back(it->second / next->second);
        any = true;
    }
    if (!any)
        throw Undecidable("every ratio denominator is below the numerical floor");
    return ratios;
}

std::vector<cplx> scheduled_ratios(const PhaseSchedule &schedule, int ris, const std::vector<int> &slots)
{
    std::vector<cplx> out;
    for (std::size_t i = 0; i + 1 < slots.size(); ++i)
        out.push_back(delta_gamma(schedule, ris, slots[i]) / delta_gamma(schedule, ris, slots[i + 1]));
    return out;
}

double association_distance(const std::vector<cplx> &observed, const std::vector<cplx> &scheduled)
{
    if (observed.size() != scheduled.size())
        throw InvalidInput("ratio sequences differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i)
        if (std::isfinite(observed[i].real()) && std::isfinite(observed[i].imag()))
            sum += std::abs(observed[i] - scheduled[i]);
    return sum;
}

void mark_los(std::vector<LabeledPath> &paths)
{
    int max_id = 0;
    for (auto &p : paths)
    {
        p.is_los = false;
        max_id = std::max(max_id, p.ris_id);
    }
    for (int k = 1; k <= max_id; ++k)
    {
        std::vector<LabeledPath> group;
        std::vector<std::size_t> where;
        for (std::size_t i = 0; i < paths.size(); ++i)
            if (paths[i].ris_id == k)
            {
                group.push_back(paths[i]);
                where.push_back(i);
            }
        if (!group.empty())
            paths[where[select_los(group)]].is_los = true;
    }
}

std::vector<LabeledPath> associate(const std::vector<ExtractedPath> &paths, const PhaseSchedule &schedule)
{
    std::vector<LabeledPath> out;
    for (const auto &path : paths)
    {
        LabeledPath labeled;
        labeled.base = path;
        const std::vector<int> slots = slots_of(path);
        if (slots.empty())
            throw InvalidInput("path carries no gains");

        if (schedule.ris_count() == 1)
        {
            labeled.ris_id = 1;
        }
        else if (schedule.mode() == LabelingMode::single_labeling)
        {
            int owner = 0;
            for (int t : slots)
            {
                const auto active = schedule.active_ris(t);
                if (active.size() != 1 || (owner != 0 && active.front() != owner))
                    throw InvalidInput("path spans slots of different RISs in single-labeling mode");
                owner = active.front();
            }
            labeled.ris_id = owner;
        }
        else
        {
            std::vector<cplx> observed;
            try
            {
                observed = ratio_signature(path);
            }
            catch (const Undecidable &)
            {
                continue;
            }
            double best = std::numeric_limits<double>::infinity();
            for (int k = 1; k <= schedule.ris_count(); ++k)
            {
                const double score = association_distance(observed, scheduled_ratios(schedule, k, slots));
                if (score < best)
                {
                    best = score;
                    labeled.ris_id = k;
                }
            }
            labeled.association_score = best;
        }
        labeled.beta = estimate_beta(path, schedule, labeled.ris_id);
        out.push_back(std::move(labeled));
    }
    mark_los(out);
    return out;
}

} // namespace rislabel
