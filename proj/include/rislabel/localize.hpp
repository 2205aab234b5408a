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

#ifndef RISLABEL_LOCALIZE_HPP
#define RISLABEL_LOCALIZE_HPP

#include <vector>

#include "rislabel/geometry.hpp"
#include "rislabel/mnomp.hpp"

namespace rislabel
{

// Known anchor and the AoA measured at the Rx for the anchor's LoS path. The Rx lies on the
// line through `anchor` with direction `aoa`.
struct BearingObservation
{
    Point2 anchor;
    double aoa = 0.0;
    double weight = 1.0;
};

struct PositionEstimate
{
    Point2 point;
    double residual = 0.0;  // weighted RMS perpendicular distance to the bearing lines (m)
    double condition = 1.0; // eigenvalue ratio of the 2x2 normal matrix
};

// Weighted least-squares point closest to all bearing lines.
// Throws InvalidInput for fewer than two observations or a non-positive weight, and
// DegenerateGeometry when every line is parallel within 1e-9 rad.
PositionEstimate triangulate(const std::vector<BearingObservation> &observations);

// Runs the extractor on the raw first-slot snapshot and returns the minimum-delay path,
// taken as the Tx LoS. Throws NoPathsFound.
ExtractedPath extract_tx_path(const CVector &first_snapshot, const Grid &grid, const StoppingRule &stop,
                              int cyclic_rounds = 1);

// AoA of extract_tx_path.
double extract_tx_aoa(const CVector &first_snapshot, const Grid &grid, const StoppingRule &stop,
                      int cyclic_rounds = 1);

} // namespace rislabel

#endif
