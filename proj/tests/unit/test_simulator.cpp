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

#include "jumpdiff/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace jumpdiff;

namespace {

constexpr double kOrigin[1] = {0.0};

PathEnsemble run(const ModelSpec& spec, double t, std::size_t n, std::size_t steps,
                 std::uint64_t seed, unsigned threads = 1) {
    SimConfig cfg;
    cfg.path_count = n;
    cfg.step_count = steps;
    cfg.seed = seed;
    cfg.threads = threads;
    return simulate_terminal(spec, std::span<const double>(kOrigin, 1), t, cfg);
}

double variance(const PathEnsemble& e) {
    double m = 0.0, s = 0.0;
    for (double v : e.terminal_values) m += v;
    m /= static_cast<double>(e.size());
    for (double v : e.terminal_values) s += (v - m) * (v - m);
    return s / static_cast<double>(e.size() - 1);
}

}  // namespace

TEST(Simulator, BrownianVariance) {
    const auto spec = ModelSpec::linear(1, 0.0, JumpLaw::gaussian(1.0));
    const auto e = run(spec, 1.0, 1000000, 8, 1);
    EXPECT_NEAR(variance(e), 1.0, 3.0 * std::sqrt(2.0 / 1e6));
    for (auto k : e.jump_counts) ASSERT_EQ(k, 0u);
}

TEST(Simulator, CompoundPoissonVariance) {
    const auto spec = ModelSpec::linear(1, 1.0, JumpLaw::gaussian(1.0));
    const auto e = run(spec, 1.0, 1000000, 8, 2);
    // X is the normal mixture N(0, 1 + N), so E X^4 = 3 E(1 + N)^2 = 15.
    EXPECT_NEAR(variance(e), 2.0, 3.0 * std::sqrt(11.0 / 1e6));
}

TEST(Simulator, JumpCountMean) {
    const auto spec = ModelSpec::linear(1, 2.0, JumpLaw::laplace(1.0), 2.0);
    const auto e = run(spec, 1.5, 200000, 4, 3);
    double mean = 0.0;
    for (auto k : e.jump_counts) mean += k;
    mean /= static_cast<double>(e.size());
    EXPECT_NEAR(mean, 3.0, 3.0 * std::sqrt(3.0 / 2e5));
}

TEST(Simulator, EmpiricalTail) {
    const auto spec = ModelSpec::linear(1, 0.0, JumpLaw::gaussian(1.0));
    const auto e = run(spec, 1.0, 1000000, 4, 4);
    const double radii[] = {0.0, 1.959964, 60.0};
    const auto tail = empirical_tail(e, std::span<const double>(kOrigin, 1), radii);
    ASSERT_EQ(tail.size(), 3u);
    EXPECT_DOUBLE_EQ(tail[0].estimate, 1.0);
    EXPECT_NEAR(tail[1].estimate, 0.05, tail[1].ci_half_width);
    EXPECT_GT(tail[1].ci_half_width, 0.0);
    EXPECT_DOUBLE_EQ(tail[2].estimate, 0.0);
}

TEST(Simulator, ThreadCountDoesNotChangeResults) {
    auto spec = ModelSpec::create(
        DriftField::componentwise({TrigonometricFamily{0.0, 0.3, 1.0, 0.0, true}}),
        DiffusionField::diagonal({TrigonometricFamily{1.0, 0.5}}), 1.5, JumpLaw::laplace(2.0),
        1.0);
    const auto a = run(spec, 1.0, 5000, 64, 99, 1);
    const auto b = run(spec, 1.0, 5000, 64, 99, 4);
    EXPECT_EQ(a.terminal_values, b.terminal_values);
    EXPECT_EQ(a.jump_counts, b.jump_counts);
    const auto c = run(spec, 1.0, 5000, 64, 100, 1);
    EXPECT_NE(a.terminal_values, c.terminal_values);
}

TEST(Simulator, RecordedPathsIncludeJumpTimes) {
    const auto spec = ModelSpec::linear(1, 3.0, JumpLaw::gaussian(1.0));
    SimConfig cfg;
    cfg.path_count = 20;
    cfg.step_count = 10;
    cfg.seed = 5;
    cfg.record_paths = true;
    const auto e = simulate_terminal(spec, std::span<const double>(kOrigin, 1), 1.0, cfg);
    ASSERT_EQ(e.paths.size(), 20u);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& p = e.paths[i];
        EXPECT_GE(p.times.size(), 11u + e.jump_counts[i]);
        EXPECT_DOUBLE_EQ(p.times.front(), 0.0);
        EXPECT_DOUBLE_EQ(p.times.back(), 1.0);
        EXPECT_DOUBLE_EQ(p.states.back(), e.terminal_values[i]);
        for (std::size_t k = 1; k < p.times.size(); ++k) EXPECT_LE(p.times[k - 1], p.times[k]);
    }
}

TEST(Simulator, NoJumpBranchWhenRateIsZero) {
    const auto spec = ModelSpec::linear(1, 0.0, JumpLaw::laplace(1.0));
    const auto a = run(spec, 1.0, 1000, 16, 8);
    const auto spec_g = ModelSpec::linear(1, 0.0, JumpLaw::gaussian(5.0));
    const auto b = run(spec_g, 1.0, 1000, 16, 8);
    EXPECT_EQ(a.terminal_values, b.terminal_values);
}

TEST(Simulator, TwoDimensionalCovariance) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
    const auto spec = ModelSpec::linear(2, 1.0, JumpLaw::multivariate_gaussian(cov));
    SimConfig cfg;
    cfg.path_count = 200000;
    cfg.step_count = 4;
    cfg.seed = 12;
    const double x[2] = {0.0, 0.0};
    const auto e = simulate_terminal(spec, x, 1.0, cfg);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        s0 += e.terminal(i)[0] * e.terminal(i)[0];
        s1 += e.terminal(i)[1] * e.terminal(i)[1];
    }
    EXPECT_NEAR(s0 / 2e5, 2.0, 3.0 * std::sqrt(11.0 / 2e5));
    EXPECT_NEAR(s1 / 2e5, 2.0, 3.0 * std::sqrt(11.0 / 2e5));
}

TEST(Simulator, RejectsBadArguments) {
    const auto spec = ModelSpec::linear(1, 0.0, JumpLaw::gaussian(1.0));
    EXPECT_THROW(run(spec, 2.0, 10, 4, 1), std::invalid_argument);
    EXPECT_THROW(run(spec, 0.0, 10, 4, 1), std::invalid_argument);
    EXPECT_THROW(run(spec, 1.0, 0, 4, 1), std::invalid_argument);
}

TEST(Simulator, DefaultStepCount) {
    EXPECT_EQ(default_step_count(1.0), 256u);
    EXPECT_GE(default_step_count(0.1), 1u);
}
