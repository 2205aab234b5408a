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

#ifndef RISLABEL_FLIPPING_HPP
#define RISLABEL_FLIPPING_HPP

#include <string>
#include <vector>

#include "rislabel/channel.hpp"

namespace rislabel
{

enum class LabelingMode
{
    single_labeling,
    multi_labeling,
};

std::string to_string(LabelingMode mode);
LabelingMode labeling_mode_from_string(const std::string &name);

// Uniform surface phase of every RIS in every slot. Slots and RIS ids are 1-based.
class PhaseSchedule
{
public:
    struct Entry
    {
        int ris;
        int slot;
        double phase;
    };

    // Builds from an explicit (k, t, phi) table; missing entries are a ConfigError.
    PhaseSchedule(LabelingMode mode, int ris_count, int slots, const std::vector<Entry> &table);

    LabelingMode mode() const { return mode_; }
    int ris_count() const { return ris_count_; }
    int slots() const { return slots_; }

    double phase(int ris, int slot) const;

    // phi^[k](t) for k = 1..K, suitable for synthesize_snapshot.
    const std::vector<double> &phases_at(int slot) const;

    // Slots t >= 2 where RIS k differs from its first-slot phase.
    const std::vector<int> &active_slots(int ris) const { return active_.at(static_cast<std::size_t>(ris - 1)); }

    // RISs whose phase differs from slot 1 at `slot`.
    std::vector<int> active_ris(int slot) const;

    std::vector<Entry> table() const;

private:
    LabelingMode mode_;
    int ris_count_;
    int slots_;
    std::vector<std::vector<double>> phases_; // [t-1][k-1]
    std::vector<std::vector<int>> active_;    // [k-1]

    void validate() const;
};

// Differential snapshot y(t) - y(1).
struct DeltaSnapshot
{
    int t = 2;
    CVector data;
    std::vector<int> active_ris;
};

// single: slot t toggles RIS ((t-2) mod K)+1 by pi, the rest hold their base phase.
// multi: every RIS cycles base, base+inc_k, base+2 inc_k, base+inc_k, ... (slot 1, even, odd).
// Default increments are 2 pi k / (K+1) (K+2 for odd K > 1, to avoid a zero step); K=1 falls back
// to the single-mode schedule.
PhaseSchedule make_schedule(LabelingMode mode, int ris_count, int slots, const std::vector<double> &base_phases = {},
                            const std::vector<double> &increments = {});

// e^{j phi_k(t)} - e^{j phi_k(1)}.
cplx delta_gamma(const PhaseSchedule &schedule, int ris, int slot);

DeltaSnapshot delta(const CsiSnapshot &y_t, const CsiSnapshot &y_1);
DeltaSnapshot delta(const CsiSnapshot &y_t, const CsiSnapshot &y_1, const PhaseSchedule &schedule);

} // namespace rislabel

#endif
