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

#ifndef RISLABEL_ERRORS_HPP
#define RISLABEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rislabel
{

// Input violates a documented precondition (degenerate geometry, zero distance, bad sizes).
class InvalidInput : public std::invalid_argument
{
public:
    explicit InvalidInput(const std::string &what) : std::invalid_argument(what) {}
};

// A configuration cannot be used as given (schedule not distinguishable, zero phase step, bad file).
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

// Non-finite values appeared inside an estimator.
class NumericalError : public std::runtime_error
{
public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

// Bearing lines do not determine a point.
class DegenerateGeometry : public std::runtime_error
{
public:
    explicit DegenerateGeometry(const std::string &what) : std::runtime_error(what) {}
};

// Ratio association has no usable slot pair.
class Undecidable : public std::runtime_error
{
public:
    explicit Undecidable(const std::string &what) : std::runtime_error(what) {}
};

// The estimator produced no usable path.
class NoPathsFound : public std::runtime_error
{
public:
    explicit NoPathsFound(const std::string &what) : std::runtime_error(what) {}
};

} // namespace rislabel

#endif
