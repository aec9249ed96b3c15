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

#include <cstddef>
#include <span>
#include <vector>

namespace jumpdiff {

/// Odd-length uniform grid on [-half_width, half_width]; node (points-1)/2
/// is exactly zero.
class UniformGrid {
public:
    UniformGrid() = default;
    UniformGrid(double half_width, std::size_t points);

    /// Grid with the given spacing covering at least [-half_width, half_width].
    static UniformGrid with_step(double half_width, double step);

    double half_width() const { return half_width_; }
    std::size_t size() const { return points_; }
    std::size_t center() const { return (points_ - 1) / 2; }
    double step() const { return step_; }
    double operator[](std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(center())) * step_;
    }
    std::vector<double> nodes() const;
    /// Same range, (points-1)*factor+1 nodes.
    UniformGrid refined(std::size_t factor) const;

    bool operator==(const UniformGrid& other) const = default;

private:
    double half_width_ = 0.0;
    std::size_t points_ = 1;
    double step_ = 0.0;
};

/// Composite trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> values, double step);

/// Pairwise summation; the rounding pattern depends only on the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace jumpdiff
