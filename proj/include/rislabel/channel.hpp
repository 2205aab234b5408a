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

#ifndef RISLABEL_CHANNEL_HPP
#define RISLABEL_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rislabel/geometry.hpp"
#include "rislabel/scene.hpp"

namespace rislabel
{

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// OFDM radio parameters. Subcarrier n sits at carrier + subcarrier_indices[n] * subcarrier_spacing.
struct RadioConfig
{
    double carrier_frequency = 3.5e9; // Hz
    double bandwidth = 100e6;         // Hz
    double subcarrier_spacing = 60e3; // Hz
    std::vector<int> subcarrier_indices;
    double tx_power = 1e-3;   // W
    double noise_level = 1e-7; // std of the real and imaginary noise parts

    double wavelength() const { return speed_of_light / carrier_frequency; }
    std::size_t subcarrier_count() const { return subcarrier_indices.size(); }

    // Baseband offsets index * spacing (Hz). The carrier term lives in the path-gain phase.
    std::vector<double> subcarrier_offsets() const;

    void validate() const;

    // `count` tones evenly spread over the in-band tones, symmetric around the carrier.
    static std::vector<int> evenly_spaced_indices(std::size_t count, double bandwidth, double spacing);

    // 128 tones: the desk-scale default.
    static RadioConfig desk();

    // Every in-band tone of the 100 MHz carrier (1620 active tones at 60 kHz).
    static RadioConfig paper();
};

// Rx antenna array; element positions in wavelengths relative to the centroid.
struct RxArray
{
    std::vector<Point2> element_positions;
    double orientation = 0.0;

    std::size_t size() const { return element_positions.size(); }
    void validate() const;

    // Equilateral triangle with side `side_wavelengths` (default half a wavelength).
    static RxArray triangular(double side_wavelengths = 0.5, double orientation = 0.0);
};

// One propagation path of the frequency-domain model. ris_tag 0 marks Tx-to-Rx paths;
// ris_tag k >= 1 marks paths via RIS k, whose coefficient per slot is
// base_gain * ris_coefficient(anchor, incident_angle, reflect_angle, phases(t)).
struct PropagationPath
{
    int ris_tag = 0;
    cplx base_gain{0.0, 0.0};
    double aoa = 0.0;   // rad, bearing from Rx toward the last vertex
    double delay = 0.0; // s
    double incident_angle = 0.0; // RIS paths only: bearing from the RIS toward Tx
    double reflect_angle = 0.0;  // RIS paths only: bearing from the RIS toward the next vertex
    int reflection_count = 0;
};

// Stacked measurement y(t); entry n * N_R + r holds subcarrier n at element r.
struct CsiSnapshot
{
    int t = 1;
    CVector data;
};

CVector steering_rx(const RxArray &array, double aoa);

CVector delay_ramp(const RadioConfig &config, double delay);

// v(theta, tau) = kron(b(tau), a_R(theta)).
CVector atom(const RxArray &array, const RadioConfig &config, double aoa, double delay);

// Array response of subsurface m for a global bearing: pi * spacing * (m - (M-1)/2) * sin(angle - orientation).
double ris_element_phase(const RisAnchor &anchor, int m, double angle);

// sum_m exp(j a_m(incident) + j phi_m + j a_m(reflect)).
cplx ris_coefficient(const RisAnchor &anchor, double incident_angle, double reflect_angle,
                     std::span<const double> surface_phases);

// Same with every phase set to zero; the phase-independent factor a_l.
cplx ris_array_factor(const RisAnchor &anchor, double incident_angle, double reflect_angle);

enum class SegmentRole
{
    direct,    // Tx to Rx, single free-space factor over the path length
    ris_to_rx, // RIS to Rx, multiplied with the Tx to RIS free-space factor
};

inline constexpr double reflection_loss_db = 5.0;

// Free-space amplitude with 5 dB per reflection; phase -2 pi d / lambda over the full distance.
// tx_ris_distance is used only for SegmentRole::ris_to_rx.
cplx path_gain(const RadioConfig &config, const PathGeometry &geometry, SegmentRole role,
               double tx_ris_distance = 0.0);

// Everything needed to synthesize snapshots at one Rx position.
struct Channel
{
    RadioConfig radio;
    RxArray array;
    std::vector<RisAnchor> ris;
    std::vector<PropagationPath> paths;
    Point2 rx_position;

    std::size_t dimension() const { return array.size() * radio.subcarrier_count(); }
};

// Ray-traces the scene and turns the geometry into propagation paths. Tx power is folded into
// base_gain as sqrt(tx_power). A RIS whose Tx link is blocked contributes no paths.
Channel make_channel(const Scene &scene, const RadioConfig &radio, const RxArray &array, Point2 rx_position);

// Complex coefficient of `path` for the given uniform per-RIS phases (index k-1 for RIS k).
cplx path_coefficient(const Channel &channel, const PropagationPath &path, std::span<const double> ris_phases);

// y(t) = sum alpha(t) v(theta, tau) + w(t). Noise is drawn from (rng_seed, t) only.
CsiSnapshot synthesize_snapshot(const Channel &channel, std::span<const double> ris_phases, int t,
                                std::uint64_t rng_seed);

// Slots t = 1..ris_phases.size() in one pass; slot t uses ris_phases[t-1]. Matches synthesize_snapshot
// slot by slot.
std::vector<CsiSnapshot> synthesize_slots(const Channel &channel, const std::vector<std::vector<double>> &ris_phases,
                                         std::uint64_t rng_seed);

// Same without noise, restricted to paths for which `keep(path)` is true.
template <typename Predicate>
CsiSnapshot synthesize_noiseless(const Channel &channel, std::span<const double> ris_phases, int t, Predicate keep);

// Expected ||w||^2 of one snapshot.
double expected_noise_energy(const Channel &channel);

// ||noiseless y||^2 / E||w||^2 for the given phases; aggregate over all entries.
double aggregate_snr(const Channel &channel, std::span<const double> ris_phases);

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// ------------------------------------------------------------------------

template <typename Predicate>
CsiSnapshot synthesize_noiseless(const Channel &channel, std::span<const double> ris_phases, int t, Predicate keep)
{
    CsiSnapshot snap;
    snap.t = t;
    snap.data.assign(channel.dimension(), cplx{0.0, 0.0});
    for (const auto &path : channel.paths)
    {
        if (!keep(path))
            continue;
        cplx alpha = path_coefficient(channel, path, ris_phases);
        CVector v = atom(channel.array, channel.radio, path.aoa, path.delay);
        for (std::size_t i = 0; i < v.size(); ++i)
            snap.data[i] += alpha * v[i];
    }
    return snap;
}

} // namespace rislabel

#endif
