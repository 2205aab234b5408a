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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "rislabel/errors.hpp"
#include "rislabel/mnomp.hpp"

using namespace rislabel;

namespace
{

const RxArray array3 = RxArray::triangular();
const RadioConfig radio = RadioConfig::desk();
constexpr double max_delay = 200e-9;

CVector oracle_atom(double aoa, double delay)
{
    const std::size_t nr = array3.size();
    CVector v(nr * radio.subcarrier_count());
    for (std::size_t n = 0; n < radio.subcarrier_count(); ++n)
    {
        const double f = radio.subcarrier_indices[n] * radio.subcarrier_spacing;
        const oracle::cplx b{std::cos(2 * oracle::pi * f * delay), -std::sin(2 * oracle::pi * f * delay)};
        for (std::size_t r = 0; r < nr; ++r)
        {
            const auto &p = array3.element_positions[r];
            v[n * nr + r] = b * oracle::steering_element(p.x, p.y, array3.orientation, aoa);
        }
    }
    return v;
}

cplx inner(const CVector &a, const CVector &b)
{
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

double energy(const CVector &a)
{
    return std::real(inner(a, a));
}

// Concentrated least-squares cost evaluated with oracle atoms.
double oracle_cost(const SlotData &data, double aoa, double delay)
{
    const CVector v = oracle_atom(aoa, delay);
    const double n2 = energy(v);
    double c = 0.0;
    for (const auto &[t, y] : data)
        c += energy(y) - std::norm(inner(v, y)) / n2;
    return c;
}

CVector noise(std::mt19937_64 &rng, double sigma)
{
    std::normal_distribution<double> g(0.0, sigma);
    CVector w(array3.size() * radio.subcarrier_count());
    for (auto &x : w)
        x = {g(rng), g(rng)};
    return w;
}

void add(CVector &y, cplx gain, const CVector &v)
{
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += gain * v[i];
}

double wrapped(double a, double b)
{
    return std::abs(std::remainder(a - b, two_pi));
}

const Grid &standard_grid()
{
    static const Grid g = Grid::standard(array3, radio, max_delay);
    return g;
}

} // namespace

TEST_CASE("SignalModel atoms match the oracle")
{
    const SignalModel m(array3, radio);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ua(0.0, two_pi), ud(0.0, max_delay);
    for (int i = 0; i < 20; ++i)
    {
        const double a = ua(rng), d = ud(rng);
        const CVector v = m.atom(a, d), o = oracle_atom(a, d);
        double err = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k)
            err = std::max(err, std::abs(v[k] - o[k]));
        CHECK(err < 1e-12);
        const CVector y = noise(rng, 1.0);
        CHECK(std::abs(m.correlate(y, a, d) - inner(o, y)) < 1e-10 * std::sqrt(energy(y) * energy(o)));
    }
    RadioConfig irregular = radio;
    irregular.subcarrier_indices = {-40, -3, 5, 17, 90};
    const SignalModel mi(array3, irregular);
    const CVector v = mi.atom(1.0, 33e-9), o = atom(array3, irregular, 1.0, 33e-9);
    for (std::size_t k = 0; k < v.size(); ++k)
        CHECK(std::abs(v[k] - o[k]) < 1e-13);
}

TEST_CASE("coarse detection: on-grid path is found exactly")
{
    const Grid &g = standard_grid();
    const std::size_t ia = 5, id = 17;
    SlotData data;
    data[2] = g.atom(ia, id);
    for (auto &x : data[2])
        x *= cplx{2.5, -1.0};
    const CoarseResult c = coarse_detect(data, g);
    CHECK(c.aoa == g.aoa_points[ia]);
    CHECK(c.delay == g.delay_points[id]);
    CHECK(std::abs(c.gains.at(2) - cplx{2.5, -1.0}) < 1e-12);
    CHECK(c.metric == doctest::Approx(std::abs(cplx{2.5, -1.0}) * g.model.dimension()).epsilon(1e-12));
}

TEST_CASE("coarse detection: off-grid path lands within one cell of a fine search")
{
    const Grid &g = standard_grid();
    const Grid fine(array3, radio, 10 * g.aoa_points.size(), (g.delay_points[1] - g.delay_points[0]) / 10, max_delay);
    const double da = g.aoa_points[1], dd = g.delay_points[1];
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ua(0.0, two_pi), ud(20e-9, 150e-9);
    for (int i = 0; i < 10; ++i)
    {
        SlotData data;
        data[2] = oracle_atom(ua(rng), ud(rng));
        data[3] = data[2];
        for (auto &x : data[3])
            x *= cplx{0.0, 2.0};
        const CoarseResult c = coarse_detect(data, g);
        const CoarseResult f = coarse_detect(data, fine);
        CHECK(wrapped(c.aoa, f.aoa) <= da + 1e-12);
        CHECK(std::abs(c.delay - f.delay) <= dd + 1e-18);
    }
}

TEST_CASE("coarse detection: zero input gives zero metric and no paths")
{
    SlotData data;
    data[2] = CVector(standard_grid().model.dimension());
    CHECK(coarse_detect(data, standard_grid()).metric == 0.0);
    CHECK(extract(data, standard_grid(), StoppingRule{}).empty());
    CHECK(extract(SlotData{}, standard_grid(), StoppingRule{}).empty());
    CHECK_THROWS_AS(coarse_detect(SlotData{}, standard_grid()), InvalidInput);
    data[2].pop_back();
    CHECK_THROWS_AS(extract(data, standard_grid(), StoppingRule{}), InvalidInput);
}

TEST_CASE("least-squares gains and cost")
{
    const SignalModel m(array3, radio);
    std::mt19937_64 rng(5);
    SlotData data;
    const CVector v = oracle_atom(2.0, 40e-9);
    data[2] = noise(rng, 0.1);
    add(data[2], {1.0, 2.0}, v);
    data[4] = noise(rng, 0.1);
    add(data[4], {-0.5, 0.0}, v);
    const auto g = least_squares_gains(m, data, 2.0, 40e-9);
    for (const auto &[t, y] : data)
        CHECK(std::abs(g.at(t) - inner(v, y) / energy(v)) < 1e-12);
    CHECK(single_path_cost(m, data, 2.0, 40e-9, g) == doctest::Approx(oracle_cost(data, 2.0, 40e-9)).epsilon(1e-10));
}

TEST_CASE("analytic gradient and Hessian agree with finite differences")
{
    const SignalModel m(array3, radio);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ua(0.0, two_pi), ud(10e-9, 150e-9), ug(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        SlotData data;
        const double ta = ua(rng), td = ud(rng);
        for (int t = 2; t <= 3; ++t)
        {
            data[t] = noise(rng, 0.05);
            add(data[t], {ug(rng), ug(rng)}, oracle_atom(ta, td));
        }
        const double a = ta + 0.2 * ug(rng), d = td + 3e-9 * ug(rng);
        std::map<int, cplx> gains{{2, {ug(rng), ug(rng)}}, {3, {ug(rng), ug(rng)}}};
        const auto an = single_path_derivatives(m, data, a, d, gains);
        auto f = [&](double x, double y) { return single_path_cost(m, data, x, y, gains); };
        auto grad = [&](double x, double y) { return single_path_derivatives(m, data, x, y, gains).gradient; };
        const double ha = 1e-6, hd = 1e-15;
        const double ga = (f(a + ha, d) - f(a - ha, d)) / (2 * ha);
        const double gd = (f(a, d + hd) - f(a, d - hd)) / (2 * hd);
        const double haa = (grad(a + ha, d)[0] - grad(a - ha, d)[0]) / (2 * ha);
        const double had = (grad(a, d + hd)[0] - grad(a, d - hd)[0]) / (2 * hd);
        const double hdd = (grad(a, d + hd)[1] - grad(a, d - hd)[1]) / (2 * hd);
        // scale each entry by the magnitude its coordinate naturally carries
        const double s = an.value + 1.0;
        const double kappa = m.delay_scale();
        worst = std::max({worst, std::abs(an.value - f(a, d)) / s, std::abs(an.gradient[0] - ga) / s,
                          std::abs(an.gradient[1] - gd) / (s * kappa), std::abs(an.hessian[0] - haa) / s,
                          std::abs(an.hessian[1] - had) / (s * kappa),
                          std::abs(an.hessian[2] - hdd) / (s * kappa * kappa)});
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("Newton refinement converges to the oracle minimizer")
{
    const SignalModel m(array3, radio);
    const Grid &g = standard_grid();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ua(0.0, two_pi), ud(20e-9, 150e-9);
    for (int i = 0; i < 5; ++i)
    {
        const double ta = ua(rng), td = ud(rng);
        SlotData data;
        for (int t = 2; t <= 4; ++t)
        {
            data[t] = noise(rng, 0.02);
            add(data[t], std::polar(1.0, 1.3 * t), oracle_atom(ta, td));
        }
        const CoarseResult c = coarse_detect(data, g);
        ExtractedPath start;
        start.aoa = c.aoa;
        start.delay = c.delay;
        start.gains = c.gains;
        const ExtractedPath refined = refine_newton(m, start, data);

        const double da = g.aoa_points[1], dd = g.delay_points[1];
        const auto best = oracle::dense_then_golden([&](double x, double y) { return oracle_cost(data, x, y * 1e-9); },
                                                    ta - da, ta + da, (td - dd) * 1e9, (td + dd) * 1e9, 40, 40);
        CHECK(wrapped(refined.aoa, best.x) < 1e-6);
        CHECK(std::abs(refined.delay - best.y * 1e-9) < 1e-4 / radio.bandwidth);
        CHECK(oracle_cost(data, refined.aoa, refined.delay) <= oracle_cost(data, c.aoa, c.delay));
    }
}

TEST_CASE("the true parameters of a noiseless path are stationary")
{
    const SignalModel m(array3, radio);
    SlotData data;
    data[2] = oracle_atom(0.7, 55e-9);
    const auto gains = least_squares_gains(m, data, 0.7, 55e-9);
    const auto d = single_path_derivatives(m, data, 0.7, 55e-9, gains);
    CHECK(std::abs(d.gradient[0]) < 1e-9 * m.dimension());
    CHECK(std::abs(d.gradient[1]) < 1e-9 * m.dimension() * m.delay_scale());
    CHECK(d.hessian[0] > 0.0);
    CHECK(d.hessian[0] * d.hessian[2] - d.hessian[1] * d.hessian[1] > 0.0);
    CHECK(std::abs(gains.at(2) - 1.0) < 1e-12);
}

TEST_CASE("extract: two separated paths are recovered")
{
    const Grid &g = standard_grid();
    SlotData data;
    for (int t = 2; t <= 5; ++t)
    {
        data[t] = CVector(g.model.dimension());
        add(data[t], std::polar(1.0, 0.4 * t), oracle_atom(0.9, 30e-9));
        add(data[t], std::polar(0.6, -1.1 * t), oracle_atom(3.8, 95e-9));
    }
    StoppingRule stop;
    stop.max_paths = 2;
    ExtractionTrace trace;
    auto paths = extract(data, g, stop, 3, &trace);
    REQUIRE(paths.size() == 2);
    std::sort(paths.begin(), paths.end(), [](const auto &a, const auto &b) { return a.delay < b.delay; });
    CHECK(wrapped(paths[0].aoa, 0.9) < 1e-4);
    CHECK(wrapped(paths[1].aoa, 3.8) < 1e-4);
    CHECK(std::abs(paths[0].delay - 30e-9) < 1e-3 / radio.bandwidth);
    CHECK(std::abs(paths[1].delay - 95e-9) < 1e-3 / radio.bandwidth);
    CHECK(std::abs(paths[0].gains.at(3) - std::polar(1.0, 1.2)) < 1e-3);
    CHECK(std::abs(paths[1].gains.at(3) - std::polar(0.6, -3.3)) < 1e-3);
    CHECK(trace.residual_energy.back() < 1e-6 * total_energy(data));
}

TEST_CASE("extract: residual is orthogonal to the atoms and never grows")
{
    const Grid &g = standard_grid();
    std::mt19937_64 rng(31);
    SlotData data;
    for (int t = 2; t <= 4; ++t)
    {
        data[t] = noise(rng, 0.05);
        add(data[t], std::polar(1.0, 0.3 * t), oracle_atom(1.4, 25e-9));
        add(data[t], std::polar(0.5, 2.0 * t), oracle_atom(4.4, 70e-9));
        add(data[t], std::polar(0.3, -0.5 * t), oracle_atom(5.5, 120e-9));
    }
    StoppingRule stop;
    stop.max_paths = 5;
    ExtractionTrace trace;
    const auto paths = extract(data, g, stop, 2, &trace);
    REQUIRE(paths.size() == 5);
    for (std::size_t i = 1; i < trace.residual_energy.size(); ++i)
        CHECK(trace.residual_energy[i] <= trace.residual_energy[i - 1] * (1.0 + 1e-12));

    SlotData residual = data;
    for (const auto &p : paths)
        for (auto &[t, y] : residual)
            add(y, -p.gains.at(t), g.model.atom(p.aoa, p.delay));
    for (const auto &p : paths)
    {
        const CVector v = g.model.atom(p.aoa, p.delay);
        for (const auto &[t, y] : residual)
            CHECK(std::abs(inner(v, y)) < 1e-9 * std::sqrt(energy(v) * total_energy(data)));
    }
    for (std::size_t i = 0; i < paths.size(); ++i)
        CHECK(paths[i].detection_order == static_cast<int>(i));
}

TEST_CASE("extract: relabeling slots permutes the gains only")
{
    const Grid &g = standard_grid();
    std::mt19937_64 rng(41);
    SlotData data;
    for (int t = 2; t <= 4; ++t)
    {
        data[t] = noise(rng, 0.05);
        add(data[t], std::polar(1.0, 0.8 * t), oracle_atom(2.2, 45e-9));
        add(data[t], std::polar(0.7, -0.6 * t), oracle_atom(5.0, 110e-9));
    }
    SlotData swapped = data;
    std::swap(swapped[2], swapped[4]);
    StoppingRule stop;
    stop.max_paths = 2;
    const auto a = extract(data, g, stop);
    const auto b = extract(swapped, g, stop);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(wrapped(a[i].aoa, b[i].aoa) < 1e-8);
        CHECK(std::abs(a[i].delay - b[i].delay) < 1e-8 / radio.bandwidth);
        CHECK(std::abs(a[i].gains.at(2) - b[i].gains.at(4)) < 1e-8);
        CHECK(std::abs(a[i].gains.at(3) - b[i].gains.at(3)) < 1e-8);
    }
}

TEST_CASE("stopping rules")
{
    const Grid &g = standard_grid();
    SlotData data;
    data[2] = CVector(g.model.dimension());
    add(data[2], 1.0, oracle_atom(1.0, 30e-9));
    add(data[2], 0.8, oracle_atom(3.0, 80e-9));
    add(data[2], 0.6, oracle_atom(5.0, 130e-9));
    StoppingRule one;
    one.max_paths = 1;
    CHECK(extract(data, g, one).size() == 1);

    // energy stop above everything but the strongest path
    StoppingRule by_energy;
    by_energy.residual_threshold = 0.65 * total_energy(data);
    CHECK(extract(data, g, by_energy).size() == 1);

    // detection test rejects paths weaker than the threshold
    StoppingRule by_detection;
    by_detection.detection_threshold = 0.5 * g.model.dimension();
    CHECK(extract(data, g, by_detection).size() == 2);

    StoppingRule bad;
    bad.max_paths = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad.max_paths = 1;
    bad.residual_threshold = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);

    const auto rule = StoppingRule::noise_referenced(0.1, 384, 8, 1.5, 7);
    CHECK(rule.max_paths == 7);
    CHECK(rule.residual_threshold == doctest::Approx(1.5 * 4 * 0.01 * 384 * 8));
}

TEST_CASE("detection energy: closed form and false-alarm rate")
{
    // one slot: exponential tail, x = ln(dimension / p)
    CHECK(StoppingRule::detection_energy(2.0, 100, 1, 0.01) == doctest::Approx(2.0 * std::log(1e4)).epsilon(1e-10));
    // two slots: e^-x (1 + x) = p / dimension
    const double x2 = StoppingRule::detection_energy(1.0, 50, 2, 0.05);
    CHECK(std::exp(-x2) * (1 + x2) == doctest::Approx(0.05 / 50).epsilon(1e-9));
    CHECK(StoppingRule::detection_energy(1.0, 50, 4, 0.05) > x2);
    CHECK_THROWS_AS(StoppingRule::detection_energy(1.0, 0, 1), InvalidInput);
    CHECK_THROWS_AS(StoppingRule::detection_energy(1.0, 10, 1, 1.0), InvalidInput);

    // Monte Carlo: the largest of `cells` independent slot-summed energies
    const std::size_t cells = 40, slots = 3;
    const double p = 0.1, variance = 2.0;
    const double thr = StoppingRule::detection_energy(variance, cells, slots, p);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, std::sqrt(variance / 2));
    const int runs = 40000;
    int alarms = 0;
    for (int r = 0; r < runs; ++r)
    {
        double peak = 0.0;
        for (std::size_t c = 0; c < cells; ++c)
        {
            double e = 0.0;
            for (std::size_t t = 0; t < slots; ++t)
            {
                const double re = g(rng), im = g(rng);
                e += re * re + im * im;
            }
            peak = std::max(peak, e);
        }
        alarms += peak > thr;
    }
    // union bound p against the exact 1 - (1 - p/cells)^cells
    const double expected = 1.0 - std::pow(1.0 - p / cells, static_cast<double>(cells));
    CHECK(static_cast<double>(alarms) / runs == doctest::Approx(expected).epsilon(0.06));
}
