// Copyright 2026 The jumpdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace jumpdiff {

/// The sampling grid does not hold enough probability mass.
class GridTooNarrow : public std::runtime_error {
public:
    GridTooNarrow(const std::string& what, double leak)
        : std::runtime_error(what), leak_(leak) {}
    double leak() const noexcept { return leak_; }

private:
    double leak_;
};

/// FFT ringing produced more negative mass than can be clipped silently.
class RingingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    /// Relative error estimate reached before giving up.
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// No envelope constants achieve containment. Carries the offending point.
class CalibrationInfeasible : public std::runtime_error {
public:
    CalibrationInfeasible(const std::string& what, double t, double r)
        : std::runtime_error(what), t_(t), r_(r) {}
    double t() const noexcept { return t_; }
    double r() const noexcept { return r_; }

private:
    double t_;
    double r_;
};

class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace jumpdiff
