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

#include "jumpdiff/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace jumpdiff {

UniformGrid::UniformGrid(double half_width, std::size_t points)
    : half_width_(half_width), points_(points) {
    if (points % 2 == 0) {
        throw std::invalid_argument("UniformGrid: point count must be odd");
    }
    if (!(half_width >= 0.0) || (points > 1 && half_width == 0.0)) {
        throw std::invalid_argument("UniformGrid: half width must be positive");
    }
    step_ = points > 1 ? 2.0 * half_width / static_cast<double>(points - 1) : 0.0;
}

UniformGrid UniformGrid::with_step(double half_width, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("UniformGrid: step must be positive");
    const auto half_count =
        static_cast<std::size_t>(std::ceil(half_width / step - 1e-9));
    return UniformGrid(static_cast<double>(half_count) * step, 2 * half_count + 1);
}

std::vector<double> UniformGrid::nodes() const {
    std::vector<double> out(points_);
    for (std::size_t i = 0; i < points_; ++i) out[i] = (*this)[i];
    return out;
}

UniformGrid UniformGrid::refined(std::size_t factor) const {
    return UniformGrid(half_width_, (points_ - 1) * factor + 1);
}

double trapezoid(std::span<const double> values, double step) {
    if (values.size() < 2) return 0.0;
    double sum = pairwise_sum(values);
    sum -= 0.5 * (values.front() + values.back());
    return sum * step;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace jumpdiff
