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

#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "rislabel/errors.hpp"
#include "rislabel/localize.hpp"

using namespace rislabel;

namespace
{

BearingObservation toward(Point2 anchor, Point2 rx, double weight = 1.0)
{
    return {anchor, std::atan2(anchor.y - rx.y, anchor.x - rx.x), weight};
}

} // namespace

TEST_CASE("two bearings intersect at the receiver")
{
    const auto est = triangulate({toward({0, 10}, {5, 5}), toward({10, 10}, {5, 5})});
    CHECK(est.point.x == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(est.point.y == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(est.residual < 1e-12);
    CHECK(est.condition == doctest::Approx(1.0).epsilon(1e-9)); // perpendicular lines
}

TEST_CASE("exact bearings recover the receiver and match the line-intersection oracle")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ux(1.0, 19.0), uy(1.0, 11.0);
    const Point2 a1{14, 11.5}, a2{19.5, 3}, a3{3, 4};
    for (int i = 0; i < 200; ++i)
    {
        const Point2 rx{ux(rng), uy(rng)};
        const auto o1 = toward(a1, rx), o2 = toward(a2, rx), o3 = toward(a3, rx);
        const auto three = triangulate({o1, o2, o3});
        CHECK(std::hypot(three.point.x - rx.x, three.point.y - rx.y) < 1e-9);
        const auto two = triangulate({o1, o2});
        const auto ref = oracle::line_intersection({a1.x, a1.y}, o1.aoa, {a2.x, a2.y}, o2.aoa);
        REQUIRE(ref.has_value());
        CHECK(std::hypot(two.point.x - ref->x, two.point.y - ref->y) < 1e-8);
    }
}

TEST_CASE("degenerate and invalid bearing sets")
{
    CHECK_THROWS_AS(triangulate({toward({0, 0}, {5, 5})}), InvalidInput);
    // parallel, also when pointing in opposite directions
    CHECK_THROWS_AS(triangulate({{{0, 0}, 0.3, 1.0}, {{0, 5}, 0.3, 1.0}}), DegenerateGeometry);
    CHECK_THROWS_AS(triangulate({{{0, 0}, 0.3, 1.0}, {{0, 5}, 0.3 + pi, 1.0}}), DegenerateGeometry);
    CHECK_THROWS_AS(triangulate({{{0, 0}, 0.3, 0.0}, {{0, 5}, 1.3, 1.0}}), InvalidInput);
}

TEST_CASE("position error grows along a ray as the lines become parallel")
{
    // Anchors at (0,0) and (10,0); receivers move away from them along the bisector.
    const Point2 a1{0, 0}, a2{10, 0};
    double previous = 0.0, previous_condition = 1.0;
    for (double y = 6.0; y <= 40.0; y += 2.0)
    {
        const Point2 rx{5, y};
        auto o1 = toward(a1, rx), o2 = toward(a2, rx);
        o1.aoa += 0.01;
        o2.aoa += 0.01;
        const auto est = triangulate({o1, o2});
        const double err = std::hypot(est.point.x - rx.x, est.point.y - rx.y);
        CHECK(err > previous);
        CHECK(est.condition > previous_condition);
        previous = err;
        previous_condition = est.condition;
    }
}

TEST_CASE("condition number of a shallow crossing")
{
    // two unit-weight lines crossing at angle d: eigenvalues 1 +- cos d
    const double d = 0.05;
    const auto est = triangulate({{{0, 0}, 0.0, 1.0}, {{0, 1}, d, 1.0}});
    CHECK(est.condition == doctest::Approx((1 + std::cos(d)) / (1 - std::cos(d))).epsilon(1e-6));
    CHECK(std::isfinite(est.point.x));
}

TEST_CASE("weights pull the estimate toward the trusted lines")
{
    // three lines forming a triangle; upweighting one moves the estimate onto it
    const std::vector<BearingObservation> obs{{{0, 0}, 0.0, 1.0}, {{0, 0}, pi / 2, 1.0}, {{0, 2}, -pi / 4, 1.0}};
    auto heavy = obs;
    heavy[2].weight = 1e6;
    const auto plain = triangulate(obs);
    const auto weighted = triangulate(heavy);
    auto distance_to_third = [](Point2 p) { return std::abs(p.x + p.y - 2.0) / std::sqrt(2.0); };
    CHECK(distance_to_third(weighted.point) < 1e-3 * distance_to_third(plain.point));
    CHECK(plain.residual > 0.0);
}

TEST_CASE("extract_tx_path returns the earliest extracted path")
{
    const RxArray array = RxArray::triangular();
    const RadioConfig radio = RadioConfig::desk();
    const Grid grid = Grid::standard(array, radio, 200e-9);
    CVector y(grid.model.dimension());
    grid.model.add_scaled_atom(y, {0.5, 0.0}, 2.0, 30e-9);
    grid.model.add_scaled_atom(y, {1.0, 0.0}, 4.0, 80e-9); // stronger but later
    StoppingRule stop;
    stop.max_paths = 2;
    const auto p = extract_tx_path(y, grid, stop);
    CHECK(std::abs(std::remainder(p.aoa - 2.0, two_pi)) < 1e-4);
    CHECK(p.delay == doctest::Approx(30e-9).epsilon(1e-4));
    CHECK(extract_tx_aoa(y, grid, stop) == doctest::Approx(p.aoa));
    CHECK_THROWS_AS(extract_tx_path(CVector(grid.model.dimension()), grid, stop), NoPathsFound);
}

TEST_CASE("a bearing error is amplified near the line through both anchors")
{
    const Point2 tx{3, 4}, ris{14, 11.5};
    const Point2 mid{0.5 * (tx.x + ris.x), 0.5 * (tx.y + ris.y)};
    const double len = distance(tx, ris);
    const Point2 normal{-(ris.y - tx.y) / len, (ris.x - tx.x) / len};
    auto error_at = [&](double offset) {
        const Point2 rx{mid.x + offset * normal.x, mid.y + offset * normal.y};
        auto o_ris = toward(ris, rx);
        o_ris.aoa += pi / 180.0;
        const auto est = triangulate({toward(tx, rx), o_ris});
        return std::pair{distance(est.point, rx), est.condition};
    };
    const auto [near_error, near_condition] = error_at(0.2);
    const auto [far_error, far_condition] = error_at(4.0);
    CHECK(near_error > 5.0 * far_error);
    CHECK(near_condition > 100.0);
    CHECK(far_condition < 10.0);
}
