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

#ifndef RISLABEL_SCENE_HPP
#define RISLABEL_SCENE_HPP

#include <string>
#include <vector>

#include "rislabel/geometry.hpp"

namespace rislabel
{

struct Bounds
{
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    bool contains(Point2 p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
    bool strictly_contains(Point2 p) const { return p.x > xmin && p.x < xmax && p.y > ymin && p.y < ymax; }
    double diagonal() const { return std::hypot(xmax - xmin, ymax - ymin); }
};

// 2D floorplan: ideal specular walls inside an axis-aligned bounding box (meters).
struct FloorPlan
{
    std::vector<Segment> walls;
    Bounds bounds;

    // Throws InvalidInput on zero-length walls or an empty bounding box.
    void validate() const;

    // Four walls on the boundary of `b`.
    static FloorPlan rectangle(const Bounds &b);
};

struct RisAnchor
{
    std::string name;
    Point2 position;
    double orientation = 0.0;   // boresight, radians in [0, 2pi)
    int subsurface_count = 10;  // M
    double element_spacing = 1.0; // in units of half a wavelength

    void validate() const;
};

// One geometric ray from source to sink. Angles are global-frame bearings:
// departure_angle points from the source toward the first vertex after it,
// arrival_angle points from the sink back toward the vertex before it (the AoA).
struct PathGeometry
{
    std::vector<Point2> vertices;
    double total_length = 0.0;
    int reflection_count = 0;
    double departure_angle = 0.0;
    double arrival_angle = 0.0;
};

// Complete static environment: plan, transmitter and RIS anchors.
struct Scene
{
    FloorPlan plan;
    Point2 tx;
    std::vector<RisAnchor> ris;
    int max_reflections = 3;

    // Checks plan, anchors and that every anchor lies inside the bounds.
    void validate() const;
};

// True iff the open segment a-b crosses no wall. Contacts at a or b themselves are ignored,
// so anchors mounted on a wall remain visible.
bool visibility(const FloorPlan &plan, Point2 a, Point2 b);

// LoS (when unobstructed) plus every valid image-source path with up to `max_reflections` bounces.
// Order: by reflection count, then by wall sequence in lexicographic order.
std::vector<PathGeometry> trace_paths(const FloorPlan &plan, Point2 source, Point2 sink, int max_reflections);

// 20 m x 12 m room with Tx and two RISs; the layout used by the defaults and acceptance runs.
Scene default_scene();

} // namespace rislabel

#endif
