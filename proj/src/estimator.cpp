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

#include "jumpdiff/estimator.hpp"

#include "jumpdiff/parallel.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jumpdiff {

namespace {

constexpr double kKernelReach = 8.0;

double t_quantile_975(std::size_t batches) {
    const boost::math::students_t dist(static_cast<double>(batches - 1));
    return boost::math::quantile(dist, 0.975);
}

std::size_t batch_begin(std::size_t b, std::size_t n, std::size_t batches) {
    return b * n / batches;
}

// Indices j with |grid[j] - z| <= reach, as a half-open range.
std::pair<std::size_t, std::size_t> kernel_window(const UniformGrid& grid, double z, double reach) {
    const double c = static_cast<double>(grid.center());
    const double lo = std::ceil((z - reach) / grid.step() + c);
    const double hi = std::floor((z + reach) / grid.step() + c);
    const double last = static_cast<double>(grid.size()) - 1.0;
    if (hi < 0.0 || lo > last) return {0, 0};
    return {static_cast<std::size_t>(std::max(lo, 0.0)),
            static_cast<std::size_t>(std::min(hi, last)) + 1};
}

void batch_statistics(const std::vector<std::vector<double>>& sums,
                      const std::vector<double>& batch_norm, double total_norm,
                      std::vector<double>& values, std::vector<double>& ci) {
    const std::size_t batches = sums.size();
    const std::size_t m = sums.front().size();
    const double tq = t_quantile_975(batches);
    values.assign(m, 0.0);
    ci.assign(m, 0.0);
    std::vector<double> column(batches);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t b = 0; b < batches; ++b) column[b] = sums[b][j];
        values[j] = pairwise_sum(column) * total_norm;
        double mean = 0.0;
        for (std::size_t b = 0; b < batches; ++b) {
            column[b] = sums[b][j] * batch_norm[b];
            mean += column[b];
        }
        mean /= static_cast<double>(batches);
        double ss = 0.0;
        for (double v : column) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(batches - 1));
        ci[j] = tq * sd / std::sqrt(static_cast<double>(batches));
    }
}

void check_batches(std::size_t n, std::size_t batches) {
    if (n < 100) throw std::invalid_argument("kde: at least 100 paths required");
    if (batches < 2 || batches > n) throw std::invalid_argument("kde: invalid batch count");
}

}  // namespace

double silverman_bandwidth(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("silverman_bandwidth: need two samples");
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(n - 1);
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return i + 1 < n ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac : sorted[i];
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) spread = sd;
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

DensityCurve kde(const PathEnsemble& ensemble, const KdeConfig& config) {
    if (ensemble.dimension != 1) throw std::invalid_argument("kde: one-dimensional ensemble required");
    const std::size_t n = ensemble.size();
    check_batches(n, config.batches);
    const double x = ensemble.origin.empty() ? 0.0 : ensemble.origin[0];
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = ensemble.terminal_values[i] - x;
    const double h = config.bandwidth ? *config.bandwidth : silverman_bandwidth(z);
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("kde: degenerate bandwidth");

    const auto& grid = config.grid;
    const std::size_t batches = config.batches;
    std::vector<std::vector<double>> sums(batches, std::vector<double>(grid.size(), 0.0));
    parallel_for(batches, config.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            auto& acc = sums[b];
            for (std::size_t i = batch_begin(b, n, batches); i < batch_begin(b + 1, n, batches); ++i) {
                const auto [lo, hi] = kernel_window(grid, z[i], kKernelReach * h);
                for (std::size_t j = lo; j < hi; ++j) {
                    const double u = (grid[j] - z[i]) / h;
                    acc[j] += std::exp(-0.5 * u * u);
                }
            }
        }
    });
    const double kernel_norm = 1.0 / (h * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> batch_norm(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        batch_norm[b] = kernel_norm /
                        static_cast<double>(batch_begin(b + 1, n, batches) - batch_begin(b, n, batches));
    }

    DensityCurve curve;
    curve.x = x;
    curve.t = ensemble.t;
    curve.grid = grid;
    curve.method = CurveMethod::kde;
    batch_statistics(sums, batch_norm, kernel_norm / static_cast<double>(n), curve.values,
                     curve.ci_half_width);
    curve.error_bound = curve.ci_half_width;
    curve.resolution = kernel_norm / static_cast<double>(n);
    std::size_t outside = 0;
    for (double v : z) outside += std::abs(v) > grid.half_width() ? 1 : 0;
    curve.grid_leak = static_cast<double>(outside) / static_cast<double>(n);
    return curve;
}

Kde2d kde_2d(const PathEnsemble& ensemble, const UniformGrid& grid, double bandwidth,
             std::size_t batches) {
    if (ensemble.dimension != 2) throw std::invalid_argument("kde_2d: two-dimensional ensemble required");
    const std::size_t n = ensemble.size();
    check_batches(n, batches);
    if (!(bandwidth > 0.0)) throw std::invalid_argument("kde_2d: degenerate bandwidth");
    const std::size_t m = grid.size();
    const double x0 = ensemble.origin.size() > 0 ? ensemble.origin[0] : 0.0;
    const double x1 = ensemble.origin.size() > 1 ? ensemble.origin[1] : 0.0;
    std::vector<std::vector<double>> sums(batches, std::vector<double>(m * m, 0.0));
    parallel_for(batches, 0, [&](std::size_t begin, std::size_t end) {
        std::vector<double> w0(m), w1(m);
        for (std::size_t b = begin; b < end; ++b) {
            for (std::size_t i = batch_begin(b, n, batches); i < batch_begin(b + 1, n, batches); ++i) {
                const auto p = ensemble.terminal(i);
                const double z0 = p[0] - x0;
                const double z1 = p[1] - x1;
                const auto [lo0, hi0] = kernel_window(grid, z0, kKernelReach * bandwidth);
                const auto [lo1, hi1] = kernel_window(grid, z1, kKernelReach * bandwidth);
                for (std::size_t j = lo1; j < hi1; ++j) {
                    const double u = (grid[j] - z1) / bandwidth;
                    w1[j] = std::exp(-0.5 * u * u);
                }
                for (std::size_t k = lo0; k < hi0; ++k) {
                    const double u = (grid[k] - z0) / bandwidth;
                    const double w = std::exp(-0.5 * u * u);
                    for (std::size_t j = lo1; j < hi1; ++j) sums[b][k * m + j] += w * w1[j];
                }
            }
        }
    });
    const double kernel_norm = 1.0 / (2.0 * std::numbers::pi * bandwidth * bandwidth);
    std::vector<double> batch_norm(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        batch_norm[b] = kernel_norm /
                        static_cast<double>(batch_begin(b + 1, n, batches) - batch_begin(b, n, batches));
    }
    Kde2d out;
    out.grid = grid;
    out.bandwidth = bandwidth;
    batch_statistics(sums, batch_norm, kernel_norm / static_cast<double>(n), out.values,
                     out.ci_half_width);
    return out;
}

std::uint64_t Histogram::total() const {
    std::uint64_t sum = underflow + overflow;
    for (auto c : counts) sum += c;
    return sum;
}

Histogram histogram(const PathEnsemble& ensemble, double lo, double hi, std::size_t bins) {
    if (ensemble.size() == 0) throw std::invalid_argument("histogram: empty ensemble");
    if (ensemble.dimension != 1) throw std::invalid_argument("histogram: one-dimensional ensemble required");
    if (bins == 0 || !(hi > lo)) throw std::invalid_argument("histogram: invalid bins");
    Histogram out;
    const double width = (hi - lo) / static_cast<double>(bins);
    out.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) out.edges[i] = lo + width * static_cast<double>(i);
    out.counts.assign(bins, 0);
    for (double v : ensemble.terminal_values) {
        if (v < lo) {
            ++out.underflow;
        } else if (v >= hi) {
            ++out.overflow;
        } else {
            const auto k = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
            ++out.counts[k];
        }
    }
    const double n = static_cast<double>(ensemble.size());
    for (std::size_t i = 0; i < bins; ++i) {
        const double p = static_cast<double>(out.counts[i]) / n;
        out.density.push_back(p / width);
        out.ci_half_width.push_back(1.96 * std::sqrt(p * (1.0 - p) / n) / width);
    }
    return out;
}

RadialEstimate radial_histogram(const PathEnsemble& ensemble, std::span<const double> radii,
                                double half_width) {
    const std::size_t n = ensemble.size();
    if (n == 0) throw std::invalid_argument("radial_histogram: empty ensemble");
    if (!(half_width > 0.0)) throw std::invalid_argument("radial_histogram: half width must be positive");
    const auto d = static_cast<std::size_t>(ensemble.dimension);
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = ensemble.terminal(i);
        double sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double o = k < ensemble.origin.size() ? ensemble.origin[k] : 0.0;
            sq += (p[k] - o) * (p[k] - o);
        }
        dist[i] = std::sqrt(sq);
    }
    std::sort(dist.begin(), dist.end());
    const double dd = static_cast<double>(d);
    const double ball = std::pow(std::numbers::pi, 0.5 * dd) / std::tgamma(0.5 * dd + 1.0);
    RadialEstimate out;
    out.half_width = half_width;
    for (double r : radii) {
        const double inner = std::max(0.0, r - half_width);
        const double outer = r + half_width;
        const auto first = std::lower_bound(dist.begin(), dist.end(), inner);
        const auto last = std::upper_bound(dist.begin(), dist.end(), outer);
        const double p = static_cast<double>(last - first) / static_cast<double>(n);
        const double volume = ball * (std::pow(outer, dd) - std::pow(inner, dd));
        out.radii.push_back(r);
        out.density.push_back(p / volume);
        out.sigma.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / volume);
    }
    return out;
}

}  // namespace jumpdiff
