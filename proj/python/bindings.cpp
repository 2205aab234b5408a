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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "rislabel/config.hpp"
#include "rislabel/errors.hpp"
#include "rislabel/harness.hpp"

namespace py = pybind11;
using namespace rislabel;

namespace
{

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexArray to_array(const CVector &v)
{
    ComplexArray a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

CVector from_array(const ComplexArray &a)
{
    return CVector(a.data(), a.data() + a.size());
}

std::vector<CsiSnapshot> snapshots_from(const std::vector<ComplexArray> &arrays)
{
    std::vector<CsiSnapshot> out;
    for (std::size_t i = 0; i < arrays.size(); ++i)
        out.push_back({static_cast<int>(i + 1), from_array(arrays[i])});
    return out;
}

py::dict path_dict(const LabeledPath &p)
{
    py::dict d;
    d["ris"] = p.ris_id;
    d["los"] = p.is_los;
    d["aoa"] = p.base.aoa;
    d["delay"] = p.base.delay;
    d["beta"] = p.beta;
    d["score"] = p.association_score;
    d["gains"] = p.base.gains;
    return d;
}

py::list paths_list(const std::vector<LabeledPath> &paths)
{
    py::list l;
    for (const auto &p : paths)
        l.append(path_dict(p));
    return l;
}

py::dict record_dict(const TrialRecord &r)
{
    py::dict d;
    d["position"] = std::pair{r.position.x, r.position.y};
    d["position_index"] = r.position_index;
    d["trial"] = r.trial;
    d["seed"] = r.seed;
    py::list ris;
    for (const auto &o : r.ris)
    {
        py::dict e;
        e["true_aoa"] = o.true_aoa;
        e["estimated_aoa"] = o.estimated_aoa;
        e["aoa_error"] = o.aoa_error;
        e["found"] = o.found;
        e["associated_paths"] = o.associated_paths;
        e["correctly_associated"] = o.correctly_associated;
        ris.append(e);
    }
    d["ris"] = ris;
    d["tx_aoa_error"] = r.tx_aoa_error;
    d["localization_error"] = r.localization_error;
    d["snr_db"] = r.snr_db;
    return d;
}

ExperimentConfig parse(const std::string &text)
{
    ExperimentConfig c = parse_config(text);
    c.validate();
    return c;
}

std::vector<Point2> points(const std::vector<std::pair<double, double>> &p)
{
    std::vector<Point2> out;
    for (const auto &[x, y] : p)
        out.push_back({x, y});
    return out;
}

} // namespace

PYBIND11_MODULE(_rislabel, m)
{
    m.doc() = "RIS multipath labeling: simulation, extraction, association and localization";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<DegenerateGeometry>(m, "DegenerateGeometry", PyExc_ValueError);
    py::register_exception<Undecidable>(m, "Undecidable", PyExc_ValueError);
    py::register_exception<NoPathsFound>(m, "NoPathsFound", PyExc_RuntimeError);

    m.def("default_config", [] { return config_to_json(ExperimentConfig{}).dump(); },
          "Default experiment configuration as a JSON string.");
    m.def("resolve_config", [](const std::string &text) { return config_to_json(parse(text)).dump(); },
          "Fill in defaults and validate a JSON configuration.");
    m.def("apply_profile",
          [](const std::string &text, const std::string &profile) {
              ExperimentConfig c = parse_config(text);
              apply_profile(c, profile_from_string(profile));
              return config_to_json(c).dump();
          });

    m.def("schedule",
          [](const std::string &mode, int ris_count, int slots) {
              const PhaseSchedule s = make_schedule(labeling_mode_from_string(mode), ris_count, slots);
              std::vector<std::vector<double>> out;
              for (int t = 1; t <= slots; ++t)
                  out.push_back(s.phases_at(t));
              return out;
          },
          py::arg("mode"), py::arg("ris_count"), py::arg("slots"), "Phases [slot][ris] of the generated schedule.");

    m.def("detection_energy", &StoppingRule::detection_energy, py::arg("entry_variance"), py::arg("dimension"),
          py::arg("slots"), py::arg("false_alarm") = 0.01);

    m.def("triangulate",
          [](const std::vector<std::tuple<double, double, double, double>> &obs) {
              std::vector<BearingObservation> b;
              for (const auto &[x, y, aoa, w] : obs)
                  b.push_back({{x, y}, aoa, w});
              const auto est = triangulate(b);
              return std::make_tuple(est.point.x, est.point.y, est.residual, est.condition);
          },
          py::arg("observations"), "Observations (anchor_x, anchor_y, aoa, weight); returns (x, y, residual, condition).");

    m.def("cdf", [](std::vector<double> v) { return cdf(std::move(v)); });

    py::class_<Experiment>(m, "Experiment")
        .def(py::init([](const std::string &text) { return Experiment(parse(text)); }), py::arg("config_json"))
        .def_property_readonly("config", [](const Experiment &e) { return config_to_json(e.config()).dump(); })
        .def("simulate",
             [](const Experiment &e, std::pair<double, double> rx, std::uint64_t seed) {
                 const auto &c = e.config();
                 const Channel ch = make_channel(c.scene, c.radio, c.array, {rx.first, rx.second});
                 py::list out;
                 for (const auto &s : e.simulate(ch, seed))
                     out.append(to_array(s.data));
                 return out;
             },
             py::arg("position"), py::arg("seed"), "Snapshots y(1..T) as complex arrays.")
        .def("label", [](const Experiment &e, const std::vector<ComplexArray> &y) { return paths_list(e.label(snapshots_from(y))); },
             py::arg("snapshots"))
        .def("locate",
             [](const Experiment &e, const std::vector<ComplexArray> &y) {
                 const Localization loc = e.locate(snapshots_from(y));
                 py::dict d;
                 d["paths"] = paths_list(loc.labeled);
                 d["tx_aoa"] = loc.tx ? py::cast(loc.tx->aoa) : py::none();
                 d["position"] = loc.position ? py::cast(std::pair{loc.position->point.x, loc.position->point.y})
                                              : py::none();
                 return d;
             },
             py::arg("snapshots"))
        .def("run_trial",
             [](const Experiment &e, std::pair<double, double> rx, std::uint64_t seed) {
                 py::gil_scoped_release release;
                 const TrialRecord r = e.run_trial({rx.first, rx.second}, seed);
                 py::gil_scoped_acquire acquire;
                 return record_dict(r);
             },
             py::arg("position"), py::arg("seed"));

    m.def("sweep",
          [](const std::string &text, const std::optional<std::vector<std::pair<double, double>>> &positions) {
              const ExperimentConfig c = parse(text);
              SweepResult res;
              {
                  py::gil_scoped_release release;
                  res = positions ? sweep(c, points(*positions)) : sweep(c);
              }
              py::list rows, records;
              for (const auto &r : res.rows)
              {
                  py::dict d;
                  d["index"] = r.index;
                  d["position"] = std::pair{r.position.x, r.position.y};
                  d["mae_deg"] = r.mae_deg;
                  d["localization_mae"] = r.localization_mae;
                  d["trials"] = r.trials;
                  rows.append(d);
              }
              for (const auto &r : res.records)
                  records.append(record_dict(r));
              py::dict out;
              out["rows"] = rows;
              out["records"] = records;
              return out;
          },
          py::arg("config_json"), py::arg("positions") = py::none(),
          "Monte Carlo sweep over the given positions, or the configured grid.");
}
