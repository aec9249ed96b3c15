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

#include "jumpdiff/error.hpp"
#include "jumpdiff/fft.hpp"
#include "jumpdiff/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace jumpdiff {

namespace {

// n-fold convolution of (mu/2) e^{-mu|z|}:
// mu e^{-mu|z|} / (2^{2n-1} (n-1)!) sum_k (2n-2-k)! / (k! (n-1-k)!) (2 mu |z|)^k.
double laplace_power_density(double mu, int n, double z) {
    const double a = std::abs(z);
    const double log_two_mu_z = a > 0.0 ? std::log(2.0 * mu * a) : 0.0;
    std::vector<double> logs(static_cast<std::size_t>(n));
    double top = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        if (a == 0.0 && k > 0) {
            logs[static_cast<std::size_t>(k)] = -std::numeric_limits<double>::infinity();
            continue;
        }
        const double v = std::lgamma(2.0 * n - 1.0 - k) - std::lgamma(k + 1.0) -
                         std::lgamma(static_cast<double>(n - k)) + k * log_two_mu_z;
        logs[static_cast<std::size_t>(k)] = v;
        top = std::max(top, v);
    }
    std::vector<double> scaled(logs.size());
    for (std::size_t k = 0; k < logs.size(); ++k) scaled[k] = std::exp(logs[k] - top);
    const double log_prefactor = std::log(mu) - mu * a - (2.0 * n - 1.0) * std::numbers::ln2 -
                                 std::lgamma(static_cast<double>(n));
    return std::exp(log_prefactor + top) * pairwise_sum(scaled);
}

}  // namespace

UniformGrid default_convolution_grid(const JumpLaw& law, int n, double horizon,
                                     double k, std::size_t points) {
    const double width = k * std::sqrt(std::max(n, 0) * law.variance() + horizon);
    return UniformGrid(width, points);
}

std::vector<double> convolution_power(const JumpLaw& law, int n,
                                      const UniformGrid& grid,
                                      const ConvolutionOptions& options) {
    if (n < 0) throw std::invalid_argument("convolution_power: n must be non-negative");
    if (grid.size() < 3) throw std::invalid_argument("convolution_power: grid too small");
    const double step = grid.step();
    std::vector<double> out(grid.size(), 0.0);
    if (n == 0) {
        out[grid.center()] = 1.0 / step;
        return out;
    }
    const double leak = law.convolution_tail_bound(n, grid.half_width());
    if (leak > options.leak_tolerance) {
        std::ostringstream msg;
        msg << "convolution_power: grid half width " << grid.half_width()
            << " leaks mass " << leak << " for n=" << n;
        throw GridTooNarrow(msg.str(), leak);
    }
    std::vector<double> base(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) base[i] = law.density(grid[i]);
    if (n == 1) return base;
    if (const auto* g = std::get_if<GaussianJumps>(&law.parameters())) {
        const double v = n * g->variance;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out[i] = std::exp(-0.5 * grid[i] * grid[i] / v) / std::sqrt(2.0 * std::numbers::pi * v);
        }
        return out;
    }
    if (const auto* l = std::get_if<LaplaceJumps>(&law.parameters())) {
        for (std::size_t i = 0; i < grid.size(); ++i) out[i] = laplace_power_density(l->rate, n, grid[i]);
        return out;
    }

    std::optional<std::vector<double>> result;
    int remaining = n;
    while (remaining > 0) {
        if (remaining & 1) {
            result = result ? fft::convolve_centered(*result, base, step) : base;
        }
        remaining >>= 1;
        if (remaining > 0) base = fft::convolve_centered(base, base, step);
    }
    out = std::move(*result);
    const double clipped = fft::clip_negative(out, step);
    if (clipped > options.clip_tolerance) {
        throw RingingError("convolution_power: negative FFT mass exceeds tolerance");
    }
    const double mass = trapezoid(out, step);
    for (double& v : out) v /= mass;
    return out;
}

}  // namespace jumpdiff
