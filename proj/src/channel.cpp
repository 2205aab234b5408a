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

#include "rislabel/channel.hpp"

#include <cmath>
#include <random>

#include "rislabel/errors.hpp"

namespace rislabel
{

std::vector<double> RadioConfig::subcarrier_offsets() const
{
    std::vector<double> f(subcarrier_indices.size());
    for (std::size_t n = 0; n < f.size(); ++n)
        f[n] = subcarrier_indices[n] * subcarrier_spacing;
    return f;
}

void RadioConfig::validate() const
{
    if (!(carrier_frequency > 0.0) || !(bandwidth > 0.0) || !(subcarrier_spacing > 0.0))
        throw InvalidInput("carrier frequency, bandwidth and subcarrier spacing must be positive");
    if (subcarrier_indices.size() < 2)
        throw InvalidInput("at least two subcarriers are required");
    for (int idx : subcarrier_indices)
        if (std::abs(idx * subcarrier_spacing) > 0.5 * bandwidth)
            throw InvalidInput("subcarrier index " + std::to_string(idx) + " lies outside the bandwidth");
    if (!(tx_power > 0.0))
        throw InvalidInput("tx_power must be positive");
    if (!(noise_level >= 0.0))
        throw InvalidInput("noise_level must be non-negative");
}

std::vector<int> RadioConfig::evenly_spaced_indices(std::size_t count, double bandwidth, double spacing)
{
    const int max_index = static_cast<int>(std::floor(0.5 * bandwidth / spacing));
    const int available = 2 * max_index + 1;
    if (count < 2 || static_cast<int>(count) > available)
        throw InvalidInput("cannot place " + std::to_string(count) + " subcarriers in the band");
    const int step = (available - 1) / static_cast<int>(count - 1);
    const int span = step * static_cast<int>(count - 1);
    const int start = -span / 2;
    std::vector<int> indices(count);
    for (std::size_t i = 0; i < count; ++i)
        indices[i] = start + step * static_cast<int>(i);
    return indices;
}

RadioConfig RadioConfig::desk()
{
    RadioConfig c;
    c.subcarrier_indices = evenly_spaced_indices(128, c.bandwidth, c.subcarrier_spacing);
    return c;
}

RadioConfig RadioConfig::paper()
{
    RadioConfig c;
    c.subcarrier_indices = evenly_spaced_indices(1620, c.bandwidth, c.subcarrier_spacing);
    return c;
}

void RxArray::validate() const
{
    if (element_positions.size() < 2)
        throw InvalidInput("Rx array needs at least two elements");
    for (std::size_t i = 0; i < element_positions.size(); ++i)
        for (std::size_t j = i + 1; j < element_positions.size(); ++j)
            if (!(distance(element_positions[i], element_positions[j]) > 0.0))
                throw InvalidInput("Rx array elements must be distinct");
}

RxArray RxArray::triangular(double side_wavelengths, double orientation)
{
    const double radius = side_wavelengths / std::sqrt(3.0);
    RxArray array;
    array.orientation = orientation;
    for (int i = 0; i < 3; ++i)
        array.element_positions.push_back(radius * unit_vector(0.5 * pi + i * two_pi / 3.0));
    return array;
}

CVector steering_rx(const RxArray &array, double aoa)
{
    // The wave propagates along -u(aoa); element phase is -2 pi p . (-u) in wavelengths.
    const Point2 toward_source = unit_vector(aoa - array.orientation);
    CVector a(array.size());
    for (std::size_t r = 0; r < a.size(); ++r)
        a[r] = std::polar(1.0, two_pi * dot(array.element_positions[r], toward_source));
    return a;
}

CVector delay_ramp(const RadioConfig &config, double delay)
{
    CVector b(config.subcarrier_count());
    for (std::size_t n = 0; n < b.size(); ++n)
        b[n] = std::polar(1.0, -two_pi * delay * config.subcarrier_indices[n] * config.subcarrier_spacing);
    return b;
}

CVector atom(const RxArray &array, const RadioConfig &config, double aoa, double delay)
{
    const CVector a = steering_rx(array, aoa);
    const CVector b = delay_ramp(config, delay);
    CVector v(a.size() * b.size());
    for (std::size_t n = 0; n < b.size(); ++n)
        for (std::size_t r = 0; r < a.size(); ++r)
            v[n * a.size() + r] = b[n] * a[r];
    return v;
}

double ris_element_phase(const RisAnchor &anchor, int m, double angle)
{
    const double centered = m - 0.5 * (anchor.subsurface_count - 1);
    return pi * anchor.element_spacing * centered * std::sin(angle - anchor.orientation);
}

cplx ris_coefficient(const RisAnchor &anchor, double incident_angle, double reflect_angle,
                     std::span<const double> surface_phases)
{
    if (static_cast<int>(surface_phases.size()) != anchor.subsurface_count)
        throw InvalidInput("surface phase count does not match the RIS subsurface count");
    cplx sum{0.0, 0.0};
    for (int m = 0; m < anchor.subsurface_count; ++m)
        sum += std::polar(1.0, ris_element_phase(anchor, m, incident_angle) + surface_phases[m] +
                                   ris_element_phase(anchor, m, reflect_angle));
    return sum;
}

cplx ris_array_factor(const RisAnchor &anchor, double incident_angle, double reflect_angle)
{
    std::vector<double> zeros(static_cast<std::size_t>(anchor.subsurface_count), 0.0);
    return ris_coefficient(anchor, incident_angle, reflect_angle, zeros);
}

cplx path_gain(const RadioConfig &config, const PathGeometry &geometry, SegmentRole role, double tx_ris_distance)
{
    const double lambda = config.wavelength();
    const double d = geometry.total_length;
    if (!(d > 0.0))
        throw InvalidInput("path length must be positive");
    double magnitude = lambda / (4.0 * pi * d);
    double phase_length = d;
    if (role == SegmentRole::ris_to_rx)
    {
        if (!(tx_ris_distance > 0.0))
            throw InvalidInput("Tx-to-RIS distance must be positive");
        magnitude *= lambda / (4.0 * pi * tx_ris_distance);
        phase_length += tx_ris_distance;
    }
    magnitude *= std::pow(10.0, -reflection_loss_db * geometry.reflection_count / 20.0);
    const double phase = -two_pi * std::fmod(phase_length / lambda, 1.0);
    return std::polar(magnitude, phase);
}

Channel make_channel(const Scene &scene, const RadioConfig &radio, const RxArray &array, Point2 rx_position)
{
    Channel channel{radio, array, scene.ris, {}, rx_position};
    const double amplitude = std::sqrt(radio.tx_power);

    for (const auto &geometry : trace_paths(scene.plan, scene.tx, rx_position, scene.max_reflections))
    {
        PropagationPath p;
        p.ris_tag = 0;
        p.base_gain = amplitude * path_gain(radio, geometry, SegmentRole::direct);
        p.aoa = wrap_2pi(geometry.arrival_angle);
        p.delay = geometry.total_length / speed_of_light;
        p.reflection_count = geometry.reflection_count;
        channel.paths.push_back(p);
    }

    for (std::size_t k = 0; k < scene.ris.size(); ++k)
    {
        const RisAnchor &anchor = scene.ris[k];
        if (!visibility(scene.plan, scene.tx, anchor.position))
            continue;
        const double tx_ris = distance(scene.tx, anchor.position);
        const double incident = bearing(anchor.position, scene.tx);
        for (const auto &geometry : trace_paths(scene.plan, anchor.position, rx_position, scene.max_reflections))
        {
            PropagationPath p;
            p.ris_tag = static_cast<int>(k) + 1;
            p.base_gain = amplitude * path_gain(radio, geometry, SegmentRole::ris_to_rx, tx_ris);
            p.aoa = wrap_2pi(geometry.arrival_angle);
            p.delay = (tx_ris + geometry.total_length) / speed_of_light;
            p.incident_angle = incident;
            p.reflect_angle = geometry.departure_angle;
            p.reflection_count = geometry.reflection_count;
            channel.paths.push_back(p);
        }
    }
    return channel;
}

cplx path_coefficient(const Channel &channel, const PropagationPath &path, std::span<const double> ris_phases)
{
    if (path.ris_tag == 0)
        return path.base_gain;
    const std::size_t k = static_cast<std::size_t>(path.ris_tag) - 1;
    if (k >= channel.ris.size() || k >= ris_phases.size())
        throw InvalidInput("no phase given for RIS " + std::to_string(path.ris_tag));
    const RisAnchor &anchor = channel.ris[k];
    std::vector<double> phases(static_cast<std::size_t>(anchor.subsurface_count), ris_phases[k]);
    return path.base_gain * ris_coefficient(anchor, path.incident_angle, path.reflect_angle, phases);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    // splitmix64 finalizer over a combined word
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

CsiSnapshot synthesize_snapshot(const Channel &channel, std::span<const double> ris_phases, int t,
                                std::uint64_t rng_seed)
{
    CsiSnapshot snap = synthesize_noiseless(channel, ris_phases, t, [](const PropagationPath &) { return true; });
    const double sigma = channel.radio.noise_level;
    if (sigma > 0.0)
    {
        std::mt19937_64 engine(mix_seed(rng_seed, static_cast<std::uint64_t>(t)));
        std::normal_distribution<double> gauss(0.0, sigma);
        for (auto &value : snap.data)
        {
            const double re = gauss(engine);
            const double im = gauss(engine);
            value += cplx{re, im};
        }
    }
    return snap;
}

std::vector<CsiSnapshot> synthesize_slots(const Channel &channel, const std::vector<std::vector<double>> &ris_phases,
                                         std::uint64_t rng_seed)
{
    std::vector<CVector> atoms;
    atoms.reserve(channel.paths.size());
    for (const auto &path : channel.paths)
        atoms.push_back(atom(channel.array, channel.radio, path.aoa, path.delay));

    std::vector<CsiSnapshot> out;
    out.reserve(ris_phases.size());
    const double sigma = channel.radio.noise_level;
    for (std::size_t i = 0; i < ris_phases.size(); ++i)
    {
        CsiSnapshot snap;
        snap.t = static_cast<int>(i) + 1;
        snap.data.assign(channel.dimension(), cplx{0.0, 0.0});
        for (std::size_t p = 0; p < channel.paths.size(); ++p)
        {
            const cplx alpha = path_coefficient(channel, channel.paths[p], ris_phases[i]);
            for (std::size_t e = 0; e < snap.data.size(); ++e)
                snap.data[e] += alpha * atoms[p][e];
        }
        if (sigma > 0.0)
        {
            std::mt19937_64 engine(mix_seed(rng_seed, static_cast<std::uint64_t>(snap.t)));
            std::normal_distribution<double> gauss(0.0, sigma);
            for (auto &value : snap.data)
            {
                const double re = gauss(engine);
                const double im = gauss(engine);
                value += cplx{re, im};
            }
        }
        out.push_back(std::move(snap));
    }
    return out;
}

double expected_noise_energy(const Channel &channel)
{
    const double sigma = channel.radio.noise_level;
    return 2.0 * sigma * sigma * static_cast<double>(channel.dimension());
}

double aggregate_snr(const Channel &channel, std::span<const double> ris_phases)
{
    const CsiSnapshot clean =
        synthesize_noiseless(channel, ris_phases, 1, [](const PropagationPath &) { return true; });
    double energy = 0.0;
    for (const auto &value : clean.data)
        energy += std::norm(value);
    return energy / expected_noise_energy(channel);
}

} // namespace rislabel
