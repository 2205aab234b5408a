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

#include "rislabel/mnomp.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "rislabel/errors.hpp"

namespace rislabel
{

SlotData slot_data(const std::vector<DeltaSnapshot> &deltas)
{
    SlotData out;
    for (const auto &d : deltas)
        out[d.t] = d.data;
    return out;
}

double total_energy(const SlotData &data)
{
    double e = 0.0;
    for (const auto &[t, y] : data)
        for (const auto &value : y)
            e += std::norm(value);
    return e;
}

// ------------------------------------------------------------------------
// SignalModel

SignalModel::SignalModel(const RxArray &array, const RadioConfig &radio) : offsets_(radio.subcarrier_offsets())
{
    const double c = std::cos(array.orientation), s = std::sin(array.orientation);
    for (const auto &p : array.element_positions)
    {
        px_.push_back(p.x * c - p.y * s);
        py_.push_back(p.x * s + p.y * c);
    }
    double mean_square = 0.0;
    for (double f : offsets_)
        mean_square += f * f;
    mean_square /= std::max<std::size_t>(offsets_.size(), 1);
    delay_scale_ = mean_square > 0.0 ? two_pi * std::sqrt(mean_square) : 1.0;

    uniform_ = offsets_.size() >= 2;
    if (uniform_)
    {
        step_ = offsets_[1] - offsets_[0];
        for (std::size_t n = 1; n < offsets_.size(); ++n)
            uniform_ = uniform_ && offsets_[n] == offsets_[0] + step_ * static_cast<double>(n);
    }
}

// exp(+j 2 pi f_n delay) for every tone, by recurrence when the tones are evenly spaced.
void SignalModel::ramp(double delay, std::vector<cplx> &out) const
{
    const std::size_t ns = offsets_.size();
    out.resize(ns);
    if (!uniform_)
    {
        for (std::size_t n = 0; n < ns; ++n)
            out[n] = std::polar(1.0, two_pi * offsets_[n] * delay);
        return;
    }
    constexpr std::size_t anchor_every = 32;
    const cplx rot = std::polar(1.0, two_pi * step_ * delay);
    for (std::size_t n = 0; n < ns; ++n)
        out[n] = n % anchor_every == 0 ? std::polar(1.0, two_pi * offsets_[n] * delay) : out[n - 1] * rot;
}

CVector SignalModel::atom(double aoa, double delay) const
{
    CVector v(dimension());
    add_scaled_atom(v, cplx{1.0, 0.0}, aoa, delay);
    return v;
}

void SignalModel::add_scaled_atom(CVector &data, cplx gain, double aoa, double delay) const
{
    const std::size_t nr = n_rx();
    const double c = std::cos(aoa), s = std::sin(aoa);
    std::vector<cplx> a(nr);
    for (std::size_t r = 0; r < nr; ++r)
        a[r] = gain * std::polar(1.0, two_pi * (px_[r] * c + py_[r] * s));
    thread_local std::vector<cplx> cb;
    ramp(delay, cb);
    for (std::size_t n = 0; n < offsets_.size(); ++n)
    {
        const cplx b = std::conj(cb[n]);
        for (std::size_t r = 0; r < nr; ++r)
            data[n * nr + r] += b * a[r];
    }
}

namespace
{

cplx correlate_with(const CVector &data, const std::vector<cplx> &ca, const std::vector<cplx> &cb)
{
    const std::size_t nr = ca.size();
    cplx sum{0.0, 0.0};
    for (std::size_t n = 0; n < cb.size(); ++n)
    {
        cplx q{0.0, 0.0};
        for (std::size_t r = 0; r < nr; ++r)
            q += ca[r] * data[n * nr + r];
        sum += cb[n] * q;
    }
    return sum;
}

} // namespace

void SignalModel::steering_conj(double aoa, std::vector<cplx> &out) const
{
    const double c = std::cos(aoa), s = std::sin(aoa);
    out.resize(n_rx());
    for (std::size_t r = 0; r < out.size(); ++r)
        out[r] = std::polar(1.0, -two_pi * (px_[r] * c + py_[r] * s));
}

cplx SignalModel::correlate(const CVector &data, double aoa, double delay) const
{
    thread_local std::vector<cplx> ca, cb;
    steering_conj(aoa, ca);
    ramp(delay, cb);
    return correlate_with(data, ca, cb);
}

std::vector<cplx> SignalModel::correlate(const SlotData &data, double aoa, double delay) const
{
    thread_local std::vector<cplx> ca, cb;
    steering_conj(aoa, ca);
    ramp(delay, cb);
    std::vector<cplx> out;
    out.reserve(data.size());
    for (const auto &[t, y] : data)
        out.push_back(correlate_with(y, ca, cb));
    return out;
}

std::array<cplx, 6> SignalModel::correlate_derivatives(const CVector &data, double aoa, double delay) const
{
    SlotData one;
    one[0] = data;
    return correlate_derivatives(one, aoa, delay).front();
}

std::vector<std::array<cplx, 6>> SignalModel::correlate_derivatives(const SlotData &data, double aoa,
                                                                    double delay) const
{
    const std::size_t nr = n_rx();
    const double c = std::cos(aoa), s = std::sin(aoa);
    const cplx j{0.0, 1.0};
    // conj(a), conj(a'), conj(a'') with a_r = exp(j phi_r), phi_r'' = -phi_r
    std::vector<cplx> ca0(nr), ca1(nr), ca2(nr);
    for (std::size_t r = 0; r < nr; ++r)
    {
        const double phi = two_pi * (px_[r] * c + py_[r] * s);
        const double dphi = two_pi * (-px_[r] * s + py_[r] * c);
        ca0[r] = std::polar(1.0, -phi);
        ca1[r] = -j * dphi * ca0[r];
        ca2[r] = cplx{-dphi * dphi, phi} * ca0[r];
    }
    thread_local std::vector<cplx> ramp_values;
    ramp(delay, ramp_values);

    std::vector<std::array<cplx, 6>> all;
    all.reserve(data.size());
    for (const auto &[t, y] : data)
    {
        std::array<cplx, 6> out{};
        for (std::size_t n = 0; n < offsets_.size(); ++n)
        {
            cplx q0{0.0, 0.0}, q1{0.0, 0.0}, q2{0.0, 0.0};
            for (std::size_t r = 0; r < nr; ++r)
            {
                const cplx v = y[n * nr + r];
                q0 += ca0[r] * v;
                q1 += ca1[r] * v;
                q2 += ca2[r] * v;
            }
            const double w = two_pi * offsets_[n];
            const cplx cb = ramp_values[n];
            const cplx cb1 = j * w * cb;
            const cplx cb2 = -w * w * cb;
            out[0] += cb * q0;
            out[1] += cb * q1;
            out[2] += cb1 * q0;
            out[3] += cb * q2;
            out[4] += cb1 * q1;
            out[5] += cb2 * q0;
        }
        all.push_back(out);
    }
    return all;
}

// ------------------------------------------------------------------------
// Grid

Grid::Grid(const RxArray &array, const RadioConfig &radio, std::size_t aoa_count, double delay_step,
           double max_delay)
    : model(array, radio)
{
    if (aoa_count == 0 || !(delay_step > 0.0) || !(max_delay >= 0.0))
        throw InvalidInput("grid needs AoA points and a positive delay step");
    for (std::size_t i = 0; i < aoa_count; ++i)
        aoa_points.push_back(two_pi * static_cast<double>(i) / static_cast<double>(aoa_count));
    const std::size_t delay_count = static_cast<std::size_t>(std::floor(max_delay / delay_step + 1e-9)) + 1;
    for (std::size_t i = 0; i < delay_count; ++i)
        delay_points.push_back(delay_step * static_cast<double>(i));

    for (double aoa : aoa_points)
    {
        CVector a = steering_rx(array, aoa);
        for (auto &x : a)
            x = std::conj(x);
        steering.push_back(std::move(a));
    }
    for (double delay : delay_points)
    {
        CVector b = delay_ramp(radio, delay);
        for (auto &x : b)
            x = std::conj(x);
        ramps.push_back(std::move(b));
    }
}

CVector Grid::atom(std::size_t aoa_index, std::size_t delay_index) const
{
    return model.atom(aoa_points.at(aoa_index), delay_points.at(delay_index));
}

Grid Grid::standard(const RxArray &array, const RadioConfig &radio, double max_delay, double oversampling)
{
    const auto aoa_count = static_cast<std::size_t>(std::ceil(oversampling * static_cast<double>(array.size())));
    return Grid(array, radio, aoa_count, 1.0 / (oversampling * radio.bandwidth), max_delay);
}

double default_max_delay(const Bounds &bounds)
{
    return 2.0 * bounds.diagonal() / speed_of_light;
}

// ------------------------------------------------------------------------
// Stopping

void StoppingRule::validate() const
{
    if (max_paths < 1)
        throw InvalidInput("max_paths must be at least 1");
    if (!(residual_threshold >= 0.0) || !(min_gain_ratio >= 0.0) || !(detection_threshold >= 0.0))
        throw InvalidInput("stopping thresholds must be non-negative");
}

StoppingRule StoppingRule::noise_referenced(double noise_level, std::size_t dimension, std::size_t slots,
                                            double factor, int max_paths)
{
    StoppingRule rule;
    rule.max_paths = max_paths;
    // each entry of w(t) - w(1) has variance 4 sigma^2
    rule.residual_threshold =
        factor * 4.0 * noise_level * noise_level * static_cast<double>(dimension) * static_cast<double>(slots);
    return rule;
}

double StoppingRule::detection_energy(double entry_variance, std::size_t dimension, std::size_t slots,
                                      double false_alarm)
{
    if (!(entry_variance >= 0.0) || dimension == 0 || slots == 0 || !(false_alarm > 0.0 && false_alarm < 1.0))
        throw InvalidInput("detection_energy needs a variance, a dimension, slots and a probability in (0, 1)");
    const double target = false_alarm / static_cast<double>(dimension);
    // upper tail of Gamma(slots, 1): exp(-x) sum_{k<slots} x^k / k!
    auto tail = [slots](double x) {
        double term = 1.0, sum = 1.0;
        for (std::size_t k = 1; k < slots; ++k)
        {
            term *= x / static_cast<double>(k);
            sum += term;
        }
        return std::exp(-x) * sum;
    };
    double lo = 0.0, hi = 1.0;
    while (tail(hi) > target)
        hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) > target ? lo : hi) = mid;
    }
    return entry_variance * hi;
}

// ------------------------------------------------------------------------
// Coarse detection

CoarseResult coarse_detect(const SlotData &residuals, const Grid &grid)
{
    if (residuals.empty())
        throw InvalidInput("coarse detection needs at least one slot");
    if (grid.size() == 0)
        throw InvalidInput("coarse detection needs a non-empty grid");

    const std::size_t nr = grid.model.n_rx();
    const std::size_t ns = grid.model.n_subcarriers();
    const std::size_t n_aoa = grid.aoa_points.size();
    const std::size_t n_delay = grid.delay_points.size();
    std::vector<double> metric(n_aoa * n_delay, 0.0);
    std::vector<cplx> q(ns);

    for (const auto &[t, y] : residuals)
    {
        if (y.size() != nr * ns)
            throw InvalidInput("residual dimension does not match the grid");
        for (std::size_t i = 0; i < n_aoa; ++i)
        {
            const CVector &ca = grid.steering[i];
            for (std::size_t n = 0; n < ns; ++n)
            {
                cplx acc{0.0, 0.0};
                for (std::size_t r = 0; r < nr; ++r)
                    acc += ca[r] * y[n * nr + r];
                q[n] = acc;
            }
            for (std::size_t d = 0; d < n_delay; ++d)
            {
                const CVector &cb = grid.ramps[d];
                cplx acc{0.0, 0.0};
                for (std::size_t n = 0; n < ns; ++n)
                    acc += cb[n] * q[n];
                metric[i * n_delay + d] += std::abs(acc);
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t idx = 1; idx < metric.size(); ++idx)
        if (metric[idx] > metric[best])
            best = idx;

    CoarseResult result;
    result.aoa = grid.aoa_points[best / n_delay];
    result.delay = grid.delay_points[best % n_delay];
    result.metric = metric[best];
    result.gains = least_squares_gains(grid.model, residuals, result.aoa, result.delay);
    return result;
}

// ------------------------------------------------------------------------
// Refinement

std::map<int, cplx> least_squares_gains(const SignalModel &model, const SlotData &data, double aoa, double delay)
{
    const double norm2 = static_cast<double>(model.dimension());
    const auto c = model.correlate(data, aoa, delay);
    std::map<int, cplx> gains;
    std::size_t i = 0;
    for (const auto &[t, y] : data)
        gains[t] = c[i++] / norm2;
    return gains;
}

double single_path_cost(const SignalModel &model, const SlotData &data, double aoa, double delay,
                        const std::map<int, cplx> &gains)
{
    const CVector v = model.atom(aoa, delay);
    double cost = 0.0;
    for (const auto &[t, y] : data)
    {
        const cplx g = gains.at(t);
        for (std::size_t i = 0; i < y.size(); ++i)
            cost += std::norm(y[i] - g * v[i]);
    }
    return cost;
}

CostDerivatives single_path_derivatives(const SignalModel &model, const SlotData &data, double aoa, double delay,
                                        const std::map<int, cplx> &gains)
{
    const double norm2 = static_cast<double>(model.dimension());
    CostDerivatives d;
    const auto all = model.correlate_derivatives(data, aoa, delay);
    std::size_t i = 0;
    for (const auto &[t, y] : data)
    {
        const cplx g = std::conj(gains.at(t));
        const auto &c = all[i++];
        double energy = 0.0;
        for (const auto &value : y)
            energy += std::norm(value);
        d.value += energy - 2.0 * std::real(g * c[0]) + std::norm(g) * norm2;
        d.gradient[0] += -2.0 * std::real(g * c[1]);
        d.gradient[1] += -2.0 * std::real(g * c[2]);
        d.hessian[0] += -2.0 * std::real(g * c[3]);
        d.hessian[1] += -2.0 * std::real(g * c[4]);
        d.hessian[2] += -2.0 * std::real(g * c[5]);
    }
    return d;
}

namespace
{

// Cost with gains re-solved by least squares: sum ||y||^2 - sum |v^H y|^2 / ||v||^2.
double concentrated_cost(const SignalModel &model, const SlotData &data, double energy, double aoa, double delay)
{
    const double norm2 = static_cast<double>(model.dimension());
    double captured = 0.0;
    for (const cplx c : model.correlate(data, aoa, delay))
        captured += std::norm(c) / norm2;
    const double cost = energy - captured;
    if (!std::isfinite(cost))
        throw NumericalError("non-finite cost during Newton refinement");
    return cost;
}

} // namespace

ExtractedPath refine_newton(const SignalModel &model, const ExtractedPath &estimate, const SlotData &data,
                            const NewtonOptions &options)
{
    if (!std::isfinite(estimate.aoa) || !std::isfinite(estimate.delay))
        throw NumericalError("refinement needs a finite starting estimate");

    const double kappa = model.delay_scale();
    const double energy = total_energy(data);
    double aoa = estimate.aoa;
    double scaled_delay = estimate.delay * kappa;
    double cost = concentrated_cost(model, data, energy, aoa, scaled_delay / kappa);

    for (int step = 0; step < options.max_steps; ++step)
    {
        const auto gains = least_squares_gains(model, data, aoa, scaled_delay / kappa);
        const auto d = single_path_derivatives(model, data, aoa, scaled_delay / kappa, gains);
        if (!std::isfinite(d.value) || !std::isfinite(d.gradient[0]) || !std::isfinite(d.gradient[1]))
            throw NumericalError("non-finite derivatives during Newton refinement");

        const double g0 = d.gradient[0];
        const double g1 = d.gradient[1] / kappa;
        const double h00 = d.hessian[0];
        const double h01 = d.hessian[1] / kappa;
        const double h11 = d.hessian[2] / (kappa * kappa);
        const double det = h00 * h11 - h01 * h01;

        auto try_direction = [&](double dx, double dy) {
            double mu = 1.0;
            for (int b = 0; b <= options.max_backtracks; ++b, mu *= 0.5)
            {
                if (std::hypot(mu * dx, mu * dy) < options.step_tolerance)
                    break;
                const double cand_aoa = aoa + mu * dx;
                const double cand_delay = scaled_delay + mu * dy;
                const double cand_cost = concentrated_cost(model, data, energy, cand_aoa, cand_delay / kappa);
                if (cand_cost < cost)
                {
                    aoa = cand_aoa;
                    scaled_delay = cand_delay;
                    cost = cand_cost;
                    return std::hypot(mu * dx, mu * dy);
                }
            }
            return -1.0;
        };

        double moved = -1.0;
        if (h00 > 0.0 && det > 0.0)
        {
            const double dx = -(h11 * g0 - h01 * g1) / det;
            const double dy = -(-h01 * g0 + h00 * g1) / det;
            moved = try_direction(dx, dy);
        }
        if (moved < 0.0)
        {
            // gradient step sized by the largest curvature magnitude
            const double curvature = std::max({std::abs(h00), std::abs(h11), 1e-300});
            moved = try_direction(-g0 / curvature, -g1 / curvature);
        }
        if (moved < 0.0 || moved < options.step_tolerance)
            break;
    }

    ExtractedPath out = estimate;
    out.aoa = wrap_2pi(aoa);
    out.delay = scaled_delay / kappa;
    out.gains = least_squares_gains(model, data, out.aoa, out.delay);
    return out;
}

// ------------------------------------------------------------------------
// Greedy extraction

namespace
{

void add_path(const SignalModel &model, SlotData &residual, const ExtractedPath &path, double sign)
{
    for (auto &[t, y] : residual)
        model.add_scaled_atom(y, sign * path.gains.at(t), path.aoa, path.delay);
}

} // namespace

void refit_gains_jointly(const SignalModel &model, const SlotData &data, std::vector<ExtractedPath> &paths)
{
    if (paths.empty())
        return;
    const auto n = static_cast<Eigen::Index>(model.dimension());
    const auto l = static_cast<Eigen::Index>(paths.size());
    Eigen::MatrixXcd atoms(n, l);
    for (Eigen::Index c = 0; c < l; ++c)
    {
        const CVector v = model.atom(paths[c].aoa, paths[c].delay);
        for (Eigen::Index i = 0; i < n; ++i)
            atoms(i, c) = v[static_cast<std::size_t>(i)];
    }
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> solver(atoms);
    for (const auto &[t, y] : data)
    {
        const Eigen::Map<const Eigen::VectorXcd> rhs(y.data(), n);
        const Eigen::VectorXcd g = solver.solve(rhs);
        for (Eigen::Index c = 0; c < l; ++c)
            paths[c].gains[t] = g(c);
    }
}

std::vector<ExtractedPath> extract(const SlotData &deltas, const Grid &grid, const StoppingRule &stop,
                                   int cyclic_rounds, ExtractionTrace *trace, std::ostream *log)
{
    stop.validate();
    std::vector<ExtractedPath> paths;
    if (deltas.empty())
        return paths;
    const SignalModel &model = grid.model;
    for (const auto &[t, y] : deltas)
        if (y.size() != model.dimension())
            throw InvalidInput("delta snapshot dimension does not match the grid");

    SlotData residual = deltas;
    double energy = total_energy(residual);
    double first_metric = 0.0;
    auto record = [&](const char *what) {
        energy = total_energy(residual);
        if (trace)
            trace->residual_energy.push_back(energy);
        if (log)
            *log << "mnomp " << what << " paths=" << paths.size() << " residual=" << energy << '\n';
    };

    while (static_cast<int>(paths.size()) < stop.max_paths)
    {
        if (energy <= stop.residual_threshold)
            break;
        const CoarseResult coarse = coarse_detect(residual, grid);
        if (!(coarse.metric > 0.0))
            break;
        if (paths.empty())
            first_metric = coarse.metric;
        else if (coarse.metric < stop.min_gain_ratio * first_metric)
            break;

        ExtractedPath candidate;
        candidate.aoa = coarse.aoa;
        candidate.delay = coarse.delay;
        candidate.gains = coarse.gains;
        candidate.metric = coarse.metric;
        candidate.detection_order = static_cast<int>(paths.size());
        candidate = refine_newton(model, candidate, residual);
        if (stop.detection_threshold > 0.0)
        {
            double captured = 0.0;
            for (const auto &[t, g] : candidate.gains)
                captured += std::norm(g);
            if (captured * static_cast<double>(model.dimension()) < stop.detection_threshold)
                break;
        }
        add_path(model, residual, candidate, -1.0);
        paths.push_back(std::move(candidate));
        record("detect");

        for (int round = 0; round < cyclic_rounds; ++round)
        {
            for (auto &path : paths)
            {
                add_path(model, residual, path, +1.0);
                path = refine_newton(model, path, residual);
                add_path(model, residual, path, -1.0);
            }
            record("cycle");
        }
    }

    refit_gains_jointly(model, deltas, paths);
    residual = deltas;
    for (const auto &path : paths)
        add_path(model, residual, path, -1.0);
    record("refit");
    return paths;
}

} // namespace rislabel
