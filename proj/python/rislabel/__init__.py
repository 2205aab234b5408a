# SPDX-License-Identifier: Apache-2.0
#
# rislabel: multipath labeling with reconfigurable intelligent surfaces
# Copyright (C) 2026 The rislabel authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""RIS multipath labeling: simulation, path extraction, association and localization."""

import json as _json

from . import _rislabel
from ._rislabel import (
    ConfigError,
    DegenerateGeometry,
    InvalidInput,
    NoPathsFound,
    NumericalError,
    Undecidable,
    cdf,
    detection_energy,
    schedule,
    triangulate,
)

__all__ = [
    "ConfigError",
    "DegenerateGeometry",
    "Experiment",
    "InvalidInput",
    "NoPathsFound",
    "NumericalError",
    "Undecidable",
    "apply_profile",
    "cdf",
    "default_config",
    "detection_energy",
    "resolve_config",
    "schedule",
    "sweep",
    "triangulate",
]


def _text(config):
    if config is None:
        return "{}"
    return config if isinstance(config, str) else _json.dumps(config)


def default_config():
    """Default configuration as a dict."""
    return _json.loads(_rislabel.default_config())


def resolve_config(config=None):
    """Validated configuration with every default filled in."""
    return _json.loads(_rislabel.resolve_config(_text(config)))


def apply_profile(config, profile):
    """Configuration with the desk or paper profile applied."""
    return _json.loads(_rislabel.apply_profile(_text(config), profile))


def sweep(config=None, positions=None):
    """Monte Carlo sweep; returns {"rows": [...], "records": [...]}."""
    return _rislabel.sweep(_text(config), positions)


class Experiment(_rislabel.Experiment):
    """Experiment built from a dict or JSON string."""

    def __init__(self, config=None):
        super().__init__(_text(config))

    @property
    def config_dict(self):
        return _json.loads(self.config)
