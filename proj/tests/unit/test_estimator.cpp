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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace jumpdiff;

namespace {

PathEnsemble brownian(std::size_t n, std::uint64_t seed, int dimension = 1) {
    const auto law = dimension == 1
                         ? JumpLaw::gaussian(1.0)
                         : JumpLaw::multivariate_gaussian(Eigen::MatrixXd::Identity(dimension, dimension));
    const auto spec = ModelSpec::linear(dimension, 0.0, law);
    SimConfig cfg;
    cfg.path_count = n;
    cfg.step_count = 1;
    cfg.seed = seed;
    const std::vector<double> x(static_cast<std::size_t>(dimension), 0.0);
    return simulate_terminal(spec, x, 1.0, cfg);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST(Kde, MatchesStandardNormal) {
    const auto e = brownian(1000000, 101);
    KdeConfig cfg;
    cfg.bandwidth = 0.05;
    cfg.grid = UniformGrid(4.0, 161);
    const auto c = kde(e, cfg);
    EXPECT_EQ(c.method, CurveMethod::kde);
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        EXPECT_NEAR(c.values[i], normal_pdf(c.grid[i]), 3.0 * c.ci_half_width[i]) << c.grid[i];
        EXPECT_GE(c.values[i], 0.0);
    }
    EXPECT_NEAR(c.resolution, 1.0 / (1e6 * 0.05 * std::sqrt(2.0 * std::numbers::pi)), 1e-18);
    EXPECT_EQ(c.error_bound, c.ci_half_width);
}

TEST(Kde, ConfidenceShrinksWithSampleSize) {
    KdeConfig cfg;
    cfg.bandwidth = 0.1;
    cfg.grid = UniformGrid(2.0, 41);
    const auto small = kde(brownian(200000, 7), cfg);
    const auto large = kde(brownian(400000, 8), cfg);
    const double ratio = median(small.ci_half_width) / median(large.ci_half_width);
    EXPECT_NEAR(ratio, std::sqrt(2.0), 0.2);
}

TEST(Kde, DeterministicAcrossRunsAndThreads) {
    const auto e = brownian(20000, 9);
    KdeConfig cfg;
    cfg.grid = UniformGrid(4.0, 81);
    cfg.threads = 1;
    const auto a = kde(e, cfg);
    cfg.threads = 4;
    const auto b = kde(e, cfg);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.ci_half_width, b.ci_half_width);
}

TEST(Kde, PermutationInvariantValues) {
    auto e = brownian(20000, 10);
    KdeConfig cfg;
    cfg.bandwidth = 0.2;
    cfg.grid = UniformGrid(4.0, 81);
    const auto a = kde(e, cfg);
    std::reverse(e.terminal_values.begin(), e.terminal_values.end());
    const auto b = kde(e, cfg);
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-14);
}

TEST(Kde, SymmetricWithinNoise) {
    const auto e = brownian(200000, 11);
    KdeConfig cfg;
    cfg.bandwidth = 0.1;
    cfg.grid = UniformGrid(4.0, 81);
    const auto c = kde(e, cfg);
    const std::size_t n = c.grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double noise = 3.0 * std::hypot(c.ci_half_width[i], c.ci_half_width[n - 1 - i]);
        EXPECT_LE(std::abs(c.values[i] - c.values[n - 1 - i]), noise + 1e-12);
    }
}

TEST(Kde, SilvermanBandwidth) {
    const auto e = brownian(100000, 12);
    const double h = silverman_bandwidth(e.terminal_values);
    EXPECT_NEAR(h, 0.9 * std::pow(1e5, -0.2), 0.02 * h);
}

TEST(Kde, RejectsBadInput) {
    KdeConfig cfg;
    cfg.grid = UniformGrid(4.0, 81);
    EXPECT_THROW(kde(brownian(50, 1), cfg), std::invalid_argument);
    cfg.batches = 1;
    EXPECT_THROW(kde(brownian(500, 1), cfg), std::invalid_argument);
    cfg.batches = 20;
    cfg.bandwidth = 0.0;
    EXPECT_THROW(kde(brownian(500, 1), cfg), std::invalid_argument);
}

TEST(Kde2d, MatchesStandardBivariateNormal) {
    const auto e = brownian(400000, 13, 2);
    const auto k = kde_2d(e, UniformGrid(3.0, 13), 0.1);
    const std::size_t m = k.grid.size();
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            const double expect = normal_pdf(k.grid[a]) * normal_pdf(k.grid[b]);
            EXPECT_NEAR(k.values[a * m + b], expect, 3.0 * k.ci_half_width[a * m + b] + 2e-4);
        }
    }
}

TEST(Histogram, CountsAreConserved) {
    const auto e = brownian(100000, 14);
    const auto h = histogram(e, -3.0, 3.0, 60);
    EXPECT_EQ(h.total(), 100000u);
    EXPECT_GT(h.underflow, 0u);
    EXPECT_GT(h.overflow, 0u);
    EXPECT_EQ(h.edges.size(), 61u);
}

TEST(Histogram, AgreesWithKde) {
    const auto e = brownian(1000000, 15);
    const auto h = histogram(e, -4.0, 4.0, 40);
    KdeConfig cfg;
    cfg.bandwidth = 0.02;
    cfg.grid = UniformGrid(4.0, 801);
    const auto c = kde(e, cfg);
    for (std::size_t b = 0; b < 40; ++b) {
        // Average of the KDE over the bin by the trapezoid rule.
        const std::size_t lo = b * 20, hi = lo + 20;
        double mass = 0.0;
        double ci = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            mass += 0.5 * (c.values[i] + c.values[i + 1]) * c.grid.step();
            ci = std::max(ci, c.ci_half_width[i]);
        }
        const double kde_mean = mass / 0.2;
        EXPECT_NEAR(h.density[b], kde_mean, 3.0 * (h.ci_half_width[b] + ci)) << b;
    }
}

TEST(Histogram, EmptyEnsembleIsAnError) {
    PathEnsemble e;
    EXPECT_THROW(histogram(e, -1.0, 1.0, 10), std::invalid_argument);
    const double r[] = {1.0};
    EXPECT_THROW(radial_histogram(e, r, 0.1), std::invalid_argument);
}

TEST(RadialHistogram, TwoDimensionalGaussian) {
    const auto e = brownian(400000, 16, 2);
    const double radii[] = {0.0, 0.5, 1.0, 2.0};
    const auto est = radial_histogram(e, radii, 0.05);
    ASSERT_EQ(est.density.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        const double r = radii[i];
        const double expect = std::exp(-0.5 * r * r) / (2.0 * std::numbers::pi);
        EXPECT_NEAR(est.density[i], expect, 3.0 * est.sigma[i] + 2e-3) << r;
    }
}
