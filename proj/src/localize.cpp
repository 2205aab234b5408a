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

#include "rislabel/localize.hpp"

#include <cmath>
#include <limits>

#include "rislabel/errors.hpp"

namespace rislabel
{

namespace
{

constexpr double parallel_tolerance = 1e-9; // rad

// Undirected angle between two lines, in [0, pi/2].
double line_angle(double a, double b)
{
    double d = std::fmod(std::abs(a - b), pi);
    return d > 0.5 * pi ? pi - d : d;
}

} // namespace

PositionEstimate triangulate(const std::vector<BearingObservation> &observations)
{
    if (observations.size() < 2)
        throw InvalidInput("triangulation needs at least two bearings");
    double spread = 0.0;
    for (const auto &o : observations)
    {
        if (!(o.weight > 0.0))
            throw InvalidInput("bearing weights must be positive");
        spread = std::max(spread, line_angle(o.aoa, observations.front().aoa));
    }
    if (spread <= parallel_tolerance)
        throw DegenerateGeometry("all bearing lines are parallel");

    // sum w n n^T p = sum w n n^T a, with n the unit normal of each line
    double a00 = 0.0, a01 = 0.0, a11 = 0.0, b0 = 0.0, b1 = 0.0, wsum = 0.0;
    for (const auto &o : observations)
    {
        const double nx = -std::sin(o.aoa), ny = std::cos(o.aoa);
        const double proj = nx * o.anchor.x + ny * o.anchor.y;
        a00 += o.weight * nx * nx;
        a01 += o.weight * nx * ny;
        a11 += o.weight * ny * ny;
        b0 += o.weight * nx * proj;
        b1 += o.weight * ny * proj;
        wsum += o.weight;
    }
    const double det = a00 * a11 - a01 * a01;
    const double half_trace = 0.5 * (a00 + a11);
    const double gap = std::sqrt(std::max(0.0, half_trace * half_trace - det));
    const double lmax = half_trace + gap;
    const double lmin = std::max(half_trace - gap, 0.0);
    if (!(det > 0.0) || !(lmin > 0.0))
        throw DegenerateGeometry("bearing normal matrix is singular");

    PositionEstimate est;
    est.point = {(a11 * b0 - a01 * b1) / det, (a00 * b1 - a01 * b0) / det};
    est.condition = lmax / lmin;

    double sq = 0.0;
    for (const auto &o : observations)
    {
        const double nx = -std::sin(o.aoa), ny = std::cos(o.aoa);
        const double dist = nx * (est.point.x - o.anchor.x) + ny * (est.point.y - o.anchor.y);
        sq += o.weight * dist * dist;
    }
    est.residual = std::sqrt(sq / wsum);
    return est;
}

ExtractedPath extract_tx_path(const CVector &first_snapshot, const Grid &grid, const StoppingRule &stop,
                              int cyclic_rounds)
{
    SlotData data;
    data[1] = first_snapshot;
    const auto paths = extract(data, grid, stop, cyclic_rounds);
    if (paths.empty())
        throw NoPathsFound("no path extracted from the first snapshot");
    const ExtractedPath *earliest = &paths.front();
    for (const auto &p : paths)
        if (p.delay < earliest->delay)
            earliest = &p;
    return *earliest;
}

double extract_tx_aoa(const CVector &first_snapshot, const Grid &grid, const StoppingRule &stop, int cyclic_rounds)
{
    return extract_tx_path(first_snapshot, grid, stop, cyclic_rounds).aoa;
}

} // namespace rislabel
