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

#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "rislabel/channel.hpp"
#include "rislabel/errors.hpp"
#include "rislabel/flipping.hpp"

using namespace rislabel;

namespace
{

double vnorm(const CVector &v)
{
    double s = 0.0;
    for (const auto &x : v)
        s += std::norm(x);
    return std::sqrt(s);
}

double vdiff(const CVector &a, const CVector &b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

Channel single_path_channel(double aoa, double delay, cplx gain)
{
    Channel ch{RadioConfig::desk(), RxArray::triangular(), {}, {}, {5, 5}};
    ch.radio.noise_level = 0.0;
    PropagationPath p;
    p.base_gain = gain;
    p.aoa = aoa;
    p.delay = delay;
    ch.paths.push_back(p);
    return ch;
}

} // namespace

TEST_CASE("radio config defaults and validation")
{
    const RadioConfig desk = RadioConfig::desk();
    CHECK(desk.carrier_frequency == 3.5e9);
    CHECK(desk.bandwidth == 100e6);
    CHECK(desk.subcarrier_spacing == 60e3);
    CHECK(desk.tx_power == 1e-3);
    CHECK(desk.noise_level == 1e-7);
    CHECK(desk.subcarrier_count() == 128);
    CHECK_NOTHROW(desk.validate());
    CHECK(RadioConfig::paper().subcarrier_count() == 1620);
    CHECK_NOTHROW(RadioConfig::paper().validate());

    RadioConfig bad = desk;
    bad.subcarrier_indices = {0};
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = desk;
    bad.subcarrier_indices.push_back(900); // 54 MHz offset
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = desk;
    bad.tx_power = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    CHECK_THROWS_AS(RadioConfig::evenly_spaced_indices(2048, 100e6, 60e3), InvalidInput);
}

TEST_CASE("steering_rx: unit modulus, periodicity and direct formula")
{
    const RxArray tri = RxArray::triangular(0.5, 0.3);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 50; ++i)
    {
        const double th = u(rng);
        const CVector a = steering_rx(tri, th);
        CHECK(vnorm(a) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
        const CVector b = steering_rx(tri, th + two_pi);
        CHECK(vdiff(a, b) < 1e-12);
        for (std::size_t r = 0; r < 3; ++r)
        {
            const auto ref = oracle::steering_element(tri.element_positions[r].x, tri.element_positions[r].y,
                                                      tri.orientation, th);
            CHECK(std::abs(a[r] - ref) < 1e-12);
        }
    }
    RxArray one;
    one.element_positions = {{0.0, 0.0}};
    CHECK(std::abs(steering_rx(one, 1.234)[0] - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("triangular array geometry")
{
    const RxArray tri = RxArray::triangular();
    REQUIRE(tri.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(distance(tri.element_positions[i], tri.element_positions[(i + 1) % 3]) ==
              doctest::Approx(0.5).epsilon(1e-14));
    CHECK_NOTHROW(tri.validate());
    RxArray bad;
    bad.element_positions = {{0, 0}, {0, 0}};
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("delay_ramp examples")
{
    const RadioConfig rc = RadioConfig::desk();
    for (const auto &x : delay_ramp(rc, 0.0))
        CHECK(std::abs(x - cplx{1.0, 0.0}) < 1e-15);
    for (const auto &x : delay_ramp(rc, 1.0 / rc.subcarrier_spacing))
        CHECK(std::abs(x - cplx{1.0, 0.0}) < 1e-9);
    const double t1 = 40e-9, t2 = t1 + 0.5 / rc.bandwidth;
    const CVector b1 = delay_ramp(rc, t1), b2 = delay_ramp(rc, t2);
    cplx ip{0.0, 0.0};
    for (std::size_t n = 0; n < b1.size(); ++n)
        ip += std::conj(b1[n]) * b2[n];
    // geometric series sum over the uniform tone grid
    const double dphi = two_pi * (t2 - t1) * (rc.subcarrier_indices[1] - rc.subcarrier_indices[0]) *
                        rc.subcarrier_spacing;
    const double ns = static_cast<double>(b1.size());
    const double expected = std::abs(std::sin(ns * dphi / 2.0) / std::sin(dphi / 2.0));
    CHECK(std::abs(ip) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(ip) < ns);
    // sign convention: entry n = exp(-j 2 pi tau f_n)
    const CVector b = delay_ramp(rc, 13e-9);
    const double f0 = rc.subcarrier_indices[0] * rc.subcarrier_spacing;
    CHECK(std::abs(b[0] - std::polar(1.0, -two_pi * 13e-9 * f0)) < 1e-12);
}

TEST_CASE("ris_coefficient examples and bounds")
{
    RisAnchor anchor{"r", {0, 0}, 0.5 * pi, 10, 1.0};
    std::vector<double> zeros(10, 0.0);
    // broadside incidence and reflection: zero element response
    CHECK(std::abs(ris_coefficient(anchor, 0.5 * pi, 0.5 * pi, zeros) - cplx{10.0, 0.0}) < 1e-12);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, two_pi);
    for (int i = 0; i < 100; ++i)
    {
        const double inc = u(rng), ref = u(rng), phi = u(rng);
        std::vector<double> uniform(10, phi);
        const cplx a = ris_coefficient(anchor, inc, ref, zeros);
        const cplx g = ris_coefficient(anchor, inc, ref, uniform);
        CHECK(std::abs(g - a * std::polar(1.0, phi)) < 1e-12);
        std::vector<double> random(10);
        for (auto &x : random)
            x = u(rng);
        CHECK(std::abs(ris_coefficient(anchor, inc, ref, random)) <= 10.0 + 1e-12);
    }
    CHECK_THROWS_AS(ris_coefficient(anchor, 0, 0, std::vector<double>(3, 0.0)), InvalidInput);
    CHECK(ris_element_phase(anchor, 0, anchor.orientation) == 0.0);
    CHECK(ris_element_phase(anchor, 9, anchor.orientation + 0.5 * pi) == doctest::Approx(4.5 * pi));
}

TEST_CASE("path_gain examples")
{
    const RadioConfig rc = RadioConfig::desk();
    PathGeometry g;
    g.total_length = 1.0;
    const double lambda = speed_of_light / 3.5e9;
    CHECK(lambda == doctest::Approx(0.08565).epsilon(1e-4));
    CHECK(std::abs(path_gain(rc, g, SegmentRole::direct)) == doctest::Approx(6.816e-3).epsilon(1e-3));
    CHECK(std::abs(path_gain(rc, g, SegmentRole::direct)) == doctest::Approx(lambda / (4 * pi)).epsilon(1e-14));
    PathGeometry g1 = g;
    g1.reflection_count = 1;
    CHECK(std::abs(path_gain(rc, g1, SegmentRole::direct)) / std::abs(path_gain(rc, g, SegmentRole::direct)) ==
          doctest::Approx(0.5623).epsilon(1e-4));
    PathGeometry g2 = g;
    g2.total_length = 2.0;
    CHECK(std::abs(path_gain(rc, g2, SegmentRole::direct)) ==
          doctest::Approx(0.5 * std::abs(path_gain(rc, g, SegmentRole::direct))).epsilon(1e-14));
    // phase follows -2 pi d / lambda
    PathGeometry g3 = g;
    g3.total_length = 3.3;
    const cplx v = path_gain(rc, g3, SegmentRole::direct);
    CHECK(std::abs(v / std::abs(v) - std::polar(1.0, -two_pi * 3.3 / lambda)) < 1e-9);
    // RIS leg multiplies both free-space factors
    const double two_legs = std::abs(path_gain(rc, g2, SegmentRole::ris_to_rx, 4.0));
    CHECK(two_legs == doctest::Approx(lambda / (4 * pi * 2.0) * lambda / (4 * pi * 4.0)).epsilon(1e-14));
    PathGeometry zero;
    CHECK_THROWS_AS(path_gain(rc, zero, SegmentRole::direct), InvalidInput);
    CHECK_THROWS_AS(path_gain(rc, g, SegmentRole::ris_to_rx, 0.0), InvalidInput);
}

TEST_CASE("synthesize_snapshot: unit path equals the atom")
{
    const Channel ch = single_path_channel(1.1, 37e-9, cplx{1.0, 0.0});
    const CsiSnapshot y = synthesize_snapshot(ch, std::vector<double>{}, 1, 9);
    const CVector v = atom(ch.array, ch.radio, 1.1, 37e-9);
    CHECK(vdiff(y.data, v) < 1e-14);
    CHECK(vnorm(y.data) == doctest::Approx(std::sqrt(3.0 * 128.0)).epsilon(1e-13));
    // Kronecker layout: entry n * N_R + r
    const CVector a = steering_rx(ch.array, 1.1), b = delay_ramp(ch.radio, 37e-9);
    CHECK(std::abs(v[5 * 3 + 2] - b[5] * a[2]) < 1e-15);
}

TEST_CASE("synthesize_snapshot: superposition and static paths")
{
    const Scene scene = default_scene();
    RadioConfig rc = RadioConfig::desk();
    rc.noise_level = 0.0;
    const Channel ch = make_channel(scene, rc, RxArray::triangular(), {11.0, 7.0});
    const std::vector<double> phases{0.4, 2.0};
    const CsiSnapshot full = synthesize_snapshot(ch, phases, 1, 0);
    CVector sum(ch.dimension(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < ch.paths.size(); ++i)
    {
        Channel one = ch;
        one.paths = {ch.paths[i]};
        const auto part = synthesize_snapshot(one, phases, 1, 0);
        for (std::size_t e = 0; e < sum.size(); ++e)
            sum[e] += part.data[e];
    }
    CHECK(vdiff(full.data, sum) <= 1e-12 * vnorm(full.data));

    const auto static_only = [](const PropagationPath &p) { return p.ris_tag == 0; };
    const auto s1 = synthesize_noiseless(ch, std::vector<double>{0.0, 0.0}, 1, static_only);
    const auto s2 = synthesize_noiseless(ch, std::vector<double>{1.0, 3.0}, 2, static_only);
    CHECK(vdiff(s1.data, s2.data) == 0.0);
}

TEST_CASE("synthesize_snapshot: noise statistics and determinism")
{
    Channel ch = single_path_channel(0.0, 10e-9, cplx{0.0, 0.0});
    ch.radio.noise_level = 2e-3;
    const auto a = synthesize_snapshot(ch, std::vector<double>{}, 3, 77);
    const auto b = synthesize_snapshot(ch, std::vector<double>{}, 3, 77);
    const auto c = synthesize_snapshot(ch, std::vector<double>{}, 4, 77);
    CHECK(vdiff(a.data, b.data) == 0.0);
    CHECK(vdiff(a.data, c.data) > 0.0);
    double re2 = 0.0, im2 = 0.0, cross = 0.0;
    std::size_t n = 0;
    for (int t = 1; t <= 40; ++t)
        for (const auto &x : synthesize_snapshot(ch, std::vector<double>{}, t, 5).data)
        {
            re2 += x.real() * x.real();
            im2 += x.imag() * x.imag();
            cross += x.real() * x.imag();
            ++n;
        }
    const double var = 4e-6;
    CHECK(re2 / n == doctest::Approx(var).epsilon(0.03));
    CHECK(im2 / n == doctest::Approx(var).epsilon(0.03));
    CHECK(std::abs(cross / n) < 0.03 * var);
    CHECK(expected_noise_energy(ch) == doctest::Approx(2.0 * var * 384.0));
}

TEST_CASE("synthesize_slots matches per-slot synthesis")
{
    const Scene scene = default_scene();
    const Channel ch = make_channel(scene, RadioConfig::desk(), RxArray::triangular(), {8.0, 9.0});
    const PhaseSchedule sched = make_schedule(LabelingMode::multi_labeling, 2, 5);
    std::vector<std::vector<double>> phases;
    for (int t = 1; t <= 5; ++t)
        phases.push_back(sched.phases_at(t));
    const auto all = synthesize_slots(ch, phases, 123);
    REQUIRE(all.size() == 5);
    for (int t = 1; t <= 5; ++t)
    {
        const auto one = synthesize_snapshot(ch, sched.phases_at(t), t, 123);
        CHECK(all[t - 1].t == t);
        CHECK(vdiff(all[t - 1].data, one.data) == 0.0);
    }
}

TEST_CASE("make_channel: path bookkeeping")
{
    const Scene scene = default_scene();
    const Point2 rx{11.0, 7.0};
    const Channel ch = make_channel(scene, RadioConfig::desk(), RxArray::triangular(), rx);
    int los[3] = {0, 0, 0};
    for (const auto &p : ch.paths)
    {
        CHECK(p.delay > 0.0);
        CHECK(std::abs(p.base_gain) > 0.0);
        CHECK(p.aoa >= 0.0);
        CHECK(p.aoa < two_pi);
        if (p.reflection_count == 0)
            los[p.ris_tag]++;
        if (p.ris_tag > 0)
        {
            const auto &anchor = scene.ris[static_cast<std::size_t>(p.ris_tag - 1)];
            CHECK(angle_distance(p.incident_angle, bearing(anchor.position, scene.tx)) < 1e-12);
            CHECK(p.delay > distance(scene.tx, anchor.position) / speed_of_light);
        }
    }
    CHECK(los[0] == 1);
    CHECK(los[1] == 1);
    CHECK(los[2] == 1);
    for (const auto &p : ch.paths)
        if (p.ris_tag == 1 && p.reflection_count == 0)
        {
            CHECK(angle_distance(p.aoa, bearing(rx, scene.ris[0].position)) < 1e-12);
            const double d = distance(scene.tx, scene.ris[0].position) + distance(scene.ris[0].position, rx);
            CHECK(p.delay == doctest::Approx(d / speed_of_light).epsilon(1e-14));
        }
}

TEST_CASE("uniform-phase RIS coefficient factorizes into beta times gamma")
{
    const Scene scene = default_scene();
    const Channel ch = make_channel(scene, RadioConfig::desk(), RxArray::triangular(), {9.0, 5.0});
    for (const auto &p : ch.paths)
    {
        if (p.ris_tag == 0)
            continue;
        const auto &anchor = ch.ris[static_cast<std::size_t>(p.ris_tag - 1)];
        const cplx beta = p.base_gain * ris_array_factor(anchor, p.incident_angle, p.reflect_angle);
        for (double phi : {0.0, 1.0, pi, 4.0})
        {
            std::vector<double> phases{0.0, 0.0};
            phases[static_cast<std::size_t>(p.ris_tag - 1)] = phi;
            const cplx alpha = path_coefficient(ch, p, phases);
            CHECK(std::abs(alpha - beta * std::polar(1.0, phi)) <= 1e-12 * std::abs(beta));
        }
    }
}

TEST_CASE("mix_seed is deterministic and spreads inputs")
{
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(0, 0) != mix_seed(0, 1));
}
