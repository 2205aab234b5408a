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

// Multisnapshot Newtonized orthogonal matching pursuit over the (AoA, delay) atoms
// v(theta, tau) = kron(b(tau), a_R(theta)). All slots share the path parameters; every slot
// carries its own complex gain.

#ifndef RISLABEL_MNOMP_HPP
#define RISLABEL_MNOMP_HPP

#include <array>
#include <map>
#include <ostream>
#include <vector>

#include "rislabel/channel.hpp"
#include "rislabel/flipping.hpp"

namespace rislabel
{

// Measurement per slot index t.
using SlotData = std::map<int, CVector>;

SlotData slot_data(const std::vector<DeltaSnapshot> &deltas);

// Closed-form atom model with derivatives. Delay is handled internally in the scaled unit
// tau * delay_scale() so both Newton coordinates have comparable curvature.
class SignalModel
{
public:
    SignalModel(const RxArray &array, const RadioConfig &radio);

    std::size_t n_rx() const { return px_.size(); }
    std::size_t n_subcarriers() const { return offsets_.size(); }
    std::size_t dimension() const { return n_rx() * n_subcarriers(); }
    double delay_scale() const { return delay_scale_; }
    const std::vector<double> &offsets() const { return offsets_; }

    CVector atom(double aoa, double delay) const;

    // v^H(aoa, delay) data.
    cplx correlate(const CVector &data, double aoa, double delay) const;
    std::vector<cplx> correlate(const SlotData &data, double aoa, double delay) const; // slot order

    // Correlations (d^i/d aoa^i d^j/d delay^j v)^H data for (i,j) in
    // {(0,0), (1,0), (0,1), (2,0), (1,1), (0,2)}.
    std::array<cplx, 6> correlate_derivatives(const CVector &data, double aoa, double delay) const;
    std::vector<std::array<cplx, 6>> correlate_derivatives(const SlotData &data, double aoa, double delay) const;

    void add_scaled_atom(CVector &data, cplx gain, double aoa, double delay) const;

private:
    void ramp(double delay, std::vector<cplx> &out) const;
    void steering_conj(double aoa, std::vector<cplx> &out) const;

    std::vector<double> px_;
    std::vector<double> py_;
    std::vector<double> offsets_;
    double delay_scale_;
    bool uniform_ = false;
    double step_ = 0.0;
};

// Discretized AoA and delay sets with their precomputed Kronecker factors.
struct Grid
{
    SignalModel model;
    std::vector<double> aoa_points;
    std::vector<double> delay_points;
    std::vector<CVector> steering; // conj(a_R) per AoA point
    std::vector<CVector> ramps;    // conj(b) per delay point

    std::size_t size() const { return aoa_points.size() * delay_points.size(); }
    CVector atom(std::size_t aoa_index, std::size_t delay_index) const;

    Grid(const RxArray &array, const RadioConfig &radio, std::size_t aoa_count, double delay_step, double max_delay);

    // AoA step 2 pi / (oversampling N_R) and delay step 1 / (oversampling bandwidth) over [0, max_delay].
    static Grid standard(const RxArray &array, const RadioConfig &radio, double max_delay, double oversampling = 4.0);
};

// Delay span covering two room diagonals.
double default_max_delay(const Bounds &bounds);

struct ExtractedPath
{
    double aoa = 0.0;   // rad in [0, 2pi)
    double delay = 0.0; // s
    std::map<int, cplx> gains;
    int detection_order = 0;
    double metric = 0.0; // coarse-detection metric at the time of detection
};

struct StoppingRule
{
    int max_paths = 16;
    double residual_threshold = 0.0; // total residual energy over all slots
    double min_gain_ratio = 1e-4;    // relative to the first detection's metric
    double detection_threshold = 0.0; // minimum energy sum_t |gain_t|^2 ||v||^2 of a new path; 0 disables

    void validate() const;

    // residual_threshold = factor * sum_t E||dw_t||^2 with dw_t = w(t) - w(1).
    static StoppingRule noise_referenced(double noise_level, std::size_t dimension, std::size_t slots,
                                         double factor = 1.5, int max_paths = 16);

    // Energy a pure-noise path exceeds with probability false_alarm over `dimension` independent cells,
    // for i.i.d. entries of variance entry_variance: entry_variance * x with dimension * P(Gamma(slots) > x)
    // = false_alarm.
    static double detection_energy(double entry_variance, std::size_t dimension, std::size_t slots,
                                   double false_alarm = 0.01);
};

struct NewtonOptions
{
    int max_steps = 25;
    int max_backtracks = 30;
    double step_tolerance = 1e-12; // scaled units
};

struct CoarseResult
{
    double aoa = 0.0;
    double delay = 0.0;
    std::map<int, cplx> gains;
    double metric = 0.0; // sum_t |v^H y_t|
};

CoarseResult coarse_detect(const SlotData &residuals, const Grid &grid);

// Least-squares gains v^H y_t / ||v||^2 for every slot.
std::map<int, cplx> least_squares_gains(const SignalModel &model, const SlotData &data, double aoa, double delay);

// Single-path cost sum_t ||y_t - gain_t v(aoa, delay)||^2 with the gains held fixed.
double single_path_cost(const SignalModel &model, const SlotData &data, double aoa, double delay,
                        const std::map<int, cplx> &gains);

struct CostDerivatives
{
    double value = 0.0;
    std::array<double, 2> gradient{};    // d/d aoa, d/d delay (per second)
    std::array<double, 3> hessian{};     // aoa-aoa, aoa-delay, delay-delay
};

// Analytic gradient and Hessian of single_path_cost with respect to (aoa, delay), gains fixed.
CostDerivatives single_path_derivatives(const SignalModel &model, const SlotData &data, double aoa, double delay,
                                        const std::map<int, cplx> &gains);

// Safeguarded Newton refinement of one path against `data` (the residual with this path included).
// The least-squares cost after refinement never exceeds the cost at the input estimate.
ExtractedPath refine_newton(const SignalModel &model, const ExtractedPath &estimate, const SlotData &data,
                            const NewtonOptions &options = {});

struct ExtractionTrace
{
    std::vector<double> residual_energy; // after every detection and cyclic round
};

std::vector<ExtractedPath> extract(const SlotData &deltas, const Grid &grid, const StoppingRule &stop,
                                   int cyclic_rounds = 3, ExtractionTrace *trace = nullptr,
                                   std::ostream *log = nullptr);

// Joint least-squares gains for fixed atoms, slot by slot.
void refit_gains_jointly(const SignalModel &model, const SlotData &data, std::vector<ExtractedPath> &paths);

double total_energy(const SlotData &data);

} // namespace rislabel

#endif
