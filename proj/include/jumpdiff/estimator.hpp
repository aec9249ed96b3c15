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

#include "jumpdiff/density_series.hpp"
#include "jumpdiff/grid.hpp"
#include "jumpdiff/simulator.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace jumpdiff {

inline constexpr std::size_t kDefaultBatchCount = 20;

/// Gaussian-kernel KDE settings. No bandwidth means Silverman's rule.
struct KdeConfig {
    std::optional<double> bandwidth;
    UniformGrid grid;
    std::size_t batches = kDefaultBatchCount;
    unsigned threads = 0;
};

/// 0.9 min(sd, IQR / 1.34) n^{-1/5}.
double silverman_bandwidth(std::span<const double> samples);

/// Estimate of y -> f_t(x, y) on y = x + grid, x = ensemble origin. The
/// ensemble is split into `batches` contiguous index blocks; ci_half_width is
/// the Student-t 95% half width of the batch means. error_bound holds the same
/// values. Requires d = 1 and at least 100 paths.
DensityCurve kde(const PathEnsemble& ensemble, const KdeConfig& config);

/// Product-kernel estimate on a tensor grid (d = 2). values and ci are
/// row-major, first coordinate slowest.
struct Kde2d {
    UniformGrid grid;
    double bandwidth = 0.0;
    std::vector<double> values;
    std::vector<double> ci_half_width;
};
Kde2d kde_2d(const PathEnsemble& ensemble, const UniformGrid& grid, double bandwidth,
             std::size_t batches = kDefaultBatchCount);

/// Binned estimate on [lo, hi) with equal bins. Out-of-range samples are
/// counted in underflow/overflow so that all counts sum to N.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;
    std::vector<double> density;
    /// 95% normal-approximation half widths of the multinomial cell probabilities,
    /// in density units.
    std::vector<double> ci_half_width;

    std::uint64_t total() const;
};
Histogram histogram(const PathEnsemble& ensemble, double lo, double hi, std::size_t bins);

/// Average density of |X_t - x| over the shell [r - h, r + h] (clamped at 0),
/// with the binomial standard deviation of that estimate.
struct RadialEstimate {
    std::vector<double> radii;
    std::vector<double> density;
    std::vector<double> sigma;
    double half_width = 0.0;
};
RadialEstimate radial_histogram(const PathEnsemble& ensemble, std::span<const double> radii,
                                double half_width);

}  // namespace jumpdiff
