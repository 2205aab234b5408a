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

#ifndef RISLABEL_GEOMETRY_HPP
#define RISLABEL_GEOMETRY_HPP

#include <cmath>
#include <numbers>

namespace rislabel
{

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;

struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

// Direction angle of the vector a -> b, in (-pi, pi].
inline double bearing(Point2 from, Point2 to) { return std::atan2(to.y - from.y, to.x - from.x); }

inline Point2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Maps any angle to [0, 2pi).
inline double wrap_2pi(double a)
{
    double r = std::fmod(a, two_pi);
    if (r < 0.0)
        r += two_pi;
    if (r >= two_pi) // fmod of tiny negatives
        r = 0.0;
    return r;
}

// Absolute angular difference folded to [0, pi].
inline double angle_distance(double a, double b)
{
    double d = wrap_2pi(a - b);
    return d > pi ? two_pi - d : d;
}

struct Segment
{
    Point2 a;
    Point2 b;

    double length() const { return distance(a, b); }
};

// Mirror image of p across the infinite line through s.
inline Point2 mirror(Point2 p, const Segment &s)
{
    Point2 d = s.b - s.a;
    double t = dot(p - s.a, d) / dot(d, d);
    Point2 foot = s.a + t * d;
    return 2.0 * foot - p;
}

// Distance from p to the closed segment s.
inline double point_segment_distance(Point2 p, const Segment &s)
{
    Point2 d = s.b - s.a;
    double t = dot(p - s.a, d) / dot(d, d);
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return distance(p, s.a + t * d);
}

} // namespace rislabel

#endif
