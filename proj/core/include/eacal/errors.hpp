// SPDX-License-Identifier: Apache-2.0
//
// eacal - extended-antenna channel snapshot simulation and calibration
// Copyright (C) 2026 eacal contributors
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

#ifndef EACAL_ERRORS_HPP
#define EACAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eacal
{

// Invalid or inconsistent input data: malformed files, violated type
// invariants, dimension mismatches. Maps to CLI exit code 2.
class DataError : public std::runtime_error
{
  public:
    explicit DataError(const std::string &msg) : std::runtime_error(msg) {}
};

// Numerical failure: degenerate templates, nonpositive variances where a
// positive one is required, non-finite intermediate values. CLI exit code 3.
class NumericalError : public std::runtime_error
{
  public:
    explicit NumericalError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace eacal

#endif
