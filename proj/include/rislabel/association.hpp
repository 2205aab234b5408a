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

#ifndef RISLABEL_ASSOCIATION_HPP
#define RISLABEL_ASSOCIATION_HPP

#include <vector>

#include "rislabel/flipping.hpp"
#include "rislabel/mnomp.hpp"

namespace rislabel
{

struct LabeledPath
{
    ExtractedPath base;
    int ris_id = 1;
    cplx beta{0.0, 0.0};
    bool is_los = false;
    double association_score = 0.0;
};

// Mean of gain_t / delta_gamma_t over the slots where RIS k toggles (and the path has a gain).
cplx estimate_beta(const ExtractedPath &path, const PhaseSchedule &schedule, int ris);

// Index of the largest |beta|; ties go to the smaller delay.
std::size_t select_los(const std::vector<LabeledPath> &paths);

// gain_t / gain_{t+1} over consecutive slot pairs. Pairs whose denominator is below
// 1e-3 of the path's largest gain are reported as NaN and skipped by the scorer.
std::vector<cplx> ratio_signature(const ExtractedPath &path);

// Ratios delta_gamma_t / delta_gamma_{t+1} scheduled for RIS k over the same slots as `slots`.
std::vector<cplx> scheduled_ratios(const PhaseSchedule &schedule, int ris, const std::vector<int> &slots);

// Sum of |observed - scheduled| over the usable ratios.
double association_distance(const std::vector<cplx> &observed, const std::vector<cplx> &scheduled);

// Single mode: a path inherits the one RIS toggled in all of its slots.
// Multi mode: each path goes to the RIS minimizing association_distance (K=1: always RIS 1);
// paths whose ratios are all unusable are dropped. Afterwards beta and the per-RIS LoS flag are set.
std::vector<LabeledPath> associate(const std::vector<ExtractedPath> &paths, const PhaseSchedule &schedule);

// Marks the LoS path of every RIS present in `paths`.
void mark_los(std::vector<LabeledPath> &paths);

} // namespace rislabel

#endif
