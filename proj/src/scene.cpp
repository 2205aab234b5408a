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

#include "rislabel/scene.hpp"

#include <cmath>
#include <string>

#include "rislabel/errors.hpp"

namespace rislabel
{

namespace
{

constexpr double on_wall_tolerance = 1e-9;    // meters
constexpr double parameter_tolerance = 1e-10; // along-segment, dimensionless

// Intersection of segments p0-p1 and q0-q1. Returns false for parallel segments.
// s is the parameter along p, u along q.
bool segment_intersection(Point2 p0, Point2 p1, Point2 q0, Point2 q1, double &s, double &u)
{
    Point2 r = p1 - p0;
    Point2 d = q1 - q0;
    double denom = cross(r, d);
    if (std::abs(denom) <= 1e-15 * norm(r) * norm(d))
        return false;
    Point2 w = q0 - p0;
    s = cross(w, d) / denom;
    u = cross(w, r) / denom;
    return true;
}

PathGeometry make_path(std::vector<Point2> vertices)
{
    PathGeometry path;
    path.reflection_count = static_cast<int>(vertices.size()) - 2;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        path.total_length += distance(vertices[i - 1], vertices[i]);
    path.departure_angle = bearing(vertices[0], vertices[1]);
    path.arrival_angle = bearing(vertices.back(), vertices[vertices.size() - 2]);
    path.vertices = std::move(vertices);
    return path;
}

struct ImageTracer
{
    const FloorPlan &plan;
    Point2 source;
    Point2 sink;
    int max_reflections;
    std::vector<PathGeometry> *out;
    std::vector<std::size_t> sequence;
    std::vector<Point2> images; // images[i] is the source mirrored across walls sequence[0..i]

    // Unfolds the current wall sequence backwards from the sink.
    void try_sequence()
    {
        const std::size_t n = sequence.size();
        std::vector<Point2> vertices(n + 2);
        vertices[0] = source;
        vertices[n + 1] = sink;
        Point2 target = sink;
        for (std::size_t i = n; i-- > 0;)
        {
            const Segment &wall = plan.walls[sequence[i]];
            double s = 0.0, u = 0.0;
            if (!segment_intersection(images[i], target, wall.a, wall.b, s, u))
                return;
            if (s <= parameter_tolerance || s >= 1.0 - parameter_tolerance)
                return;
            if (u < -parameter_tolerance || u > 1.0 + parameter_tolerance)
                return;
            Point2 hit = images[i] + s * (target - images[i]);
            if (distance(hit, target) <= on_wall_tolerance)
                return;
            vertices[i + 1] = hit;
            target = hit;
        }
        if (distance(vertices[0], vertices[1]) <= on_wall_tolerance)
            return;
        for (std::size_t i = 1; i < vertices.size(); ++i)
            if (!visibility(plan, vertices[i - 1], vertices[i]))
                return;
        out->push_back(make_path(std::move(vertices)));
    }

    void descend(int depth)
    {
        for (std::size_t w = 0; w < plan.walls.size(); ++w)
        {
            if (!sequence.empty() && sequence.back() == w)
                continue;
            Point2 previous = images.empty() ? source : images.back();
            sequence.push_back(w);
            images.push_back(mirror(previous, plan.walls[w]));
            if (static_cast<int>(sequence.size()) == depth)
                try_sequence();
            else
                descend(depth);
            sequence.pop_back();
            images.pop_back();
        }
    }
};

void check_not_on_wall(const FloorPlan &plan, Point2 p, const char *what)
{
    for (const auto &wall : plan.walls)
        if (point_segment_distance(p, wall) <= on_wall_tolerance)
            throw InvalidInput(std::string(what) + " lies on a wall");
}

} // namespace

void FloorPlan::validate() const
{
    if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin))
        throw InvalidInput("floorplan bounds are empty");
    for (const auto &wall : walls)
        if (!(wall.length() > 0.0))
            throw InvalidInput("floorplan contains a zero-length wall");
}

FloorPlan FloorPlan::rectangle(const Bounds &b)
{
    FloorPlan plan;
    plan.bounds = b;
    Point2 p00{b.xmin, b.ymin}, p10{b.xmax, b.ymin}, p11{b.xmax, b.ymax}, p01{b.xmin, b.ymax};
    plan.walls = {{p00, p10}, {p10, p11}, {p11, p01}, {p01, p00}};
    return plan;
}

void RisAnchor::validate() const
{
    if (subsurface_count < 1)
        throw InvalidInput("RIS '" + name + "' needs at least one subsurface");
    if (!(orientation >= 0.0 && orientation < two_pi))
        throw InvalidInput("RIS '" + name + "' orientation must lie in [0, 2pi)");
    if (!(element_spacing > 0.0))
        throw InvalidInput("RIS '" + name + "' element spacing must be positive");
}

void Scene::validate() const
{
    plan.validate();
    if (max_reflections < 0)
        throw InvalidInput("max_reflections must be non-negative");
    if (!plan.bounds.contains(tx))
        throw InvalidInput("Tx lies outside the floorplan bounds");
    for (const auto &anchor : ris)
    {
        anchor.validate();
        if (!plan.bounds.contains(anchor.position))
            throw InvalidInput("RIS '" + anchor.name + "' lies outside the floorplan bounds");
    }
}

bool visibility(const FloorPlan &plan, Point2 a, Point2 b)
{
    for (const auto &wall : plan.walls)
    {
        double s = 0.0, u = 0.0;
        if (!segment_intersection(a, b, wall.a, wall.b, s, u))
            continue;
        if (s > parameter_tolerance && s < 1.0 - parameter_tolerance && u >= -parameter_tolerance &&
            u <= 1.0 + parameter_tolerance)
            return false;
    }
    return true;
}

std::vector<PathGeometry> trace_paths(const FloorPlan &plan, Point2 source, Point2 sink, int max_reflections)
{
    if (max_reflections < 0)
        throw InvalidInput("max_reflections must be non-negative");
    if (distance(source, sink) <= on_wall_tolerance)
        throw InvalidInput("source and sink coincide");
    check_not_on_wall(plan, source, "source");
    check_not_on_wall(plan, sink, "sink");

    std::vector<PathGeometry> paths;
    if (visibility(plan, source, sink))
        paths.push_back(make_path({source, sink}));

    ImageTracer tracer{plan, source, sink, max_reflections, &paths, {}, {}};
    for (int depth = 1; depth <= max_reflections; ++depth)
        tracer.descend(depth);
    return paths;
}

Scene default_scene()
{
    Scene scene;
    scene.plan = FloorPlan::rectangle({0.0, 0.0, 20.0, 12.0});
    scene.tx = {3.0, 4.0};
    scene.ris = {
        {"RIS1", {14.0, 11.5}, 1.5 * pi, 10, 1.0},
        {"RIS2", {19.5, 3.0}, pi, 10, 1.0},
    };
    scene.max_reflections = 3;
    return scene;
}

} // namespace rislabel
