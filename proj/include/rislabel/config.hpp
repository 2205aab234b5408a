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

#ifndef RISLABEL_CONFIG_HPP
#define RISLABEL_CONFIG_HPP

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rislabel/harness.hpp"

namespace rislabel
{

// JSON experiment files. Every section and key is optional and falls back to the defaults of
// ExperimentConfig; unknown keys are rejected. See docs/config.md for the schema.
ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &config);

ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

// Snapshot tables: one row per (slot, entry) with columns t,index,re,im.
void write_snapshots_csv(std::ostream &os, const std::vector<CsiSnapshot> &snapshots);
std::vector<CsiSnapshot> read_snapshots_csv(std::istream &is);

// Extracted paths: one row per (path, slot gain).
void write_paths_csv(std::ostream &os, const std::vector<ExtractedPath> &paths);
void write_labeled_csv(std::ostream &os, const std::vector<LabeledPath> &paths);

} // namespace rislabel

#endif
