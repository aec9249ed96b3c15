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

#include "../oracles.hpp"

#include "jumpdiff/error.hpp"
#include "jumpdiff/fft.hpp"
#include "jumpdiff/jump_law.hpp"
#include "jumpdiff/quadrature.hpp"
#include "jumpdiff/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace jumpdiff;

namespace {

double sample_variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST(JumpLaw, DensityAtOrigin) {
    EXPECT_DOUBLE_EQ(JumpLaw::laplace(1.0).density(0.0), 0.5);
    EXPECT_NEAR(JumpLaw::gaussian(1.0).density(0.0), 0.3989422804014327, 1e-15);
    const double origin[2] = {0.0, 0.0};
    EXPECT_DOUBLE_EQ(JumpLaw::product_laplace({1.0, 2.0}).density(origin), 0.5);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
    EXPECT_NEAR(JumpLaw::multivariate_gaussian(eye).density(origin), 1.0 / (2.0 * std::numbers::pi),
                1e-15);
}

TEST(JumpLaw, MgfValues) {
    EXPECT_DOUBLE_EQ(JumpLaw::gaussian(1.0).mgf(0.0), 1.0);
    EXPECT_DOUBLE_EQ(JumpLaw::laplace(2.0).mgf(0.0), 1.0);
    EXPECT_NEAR(JumpLaw::gaussian(1.0).mgf(1.0), 1.6487212707001282, 1e-15);
    EXPECT_NEAR(JumpLaw::laplace(2.0).mgf(1.0), 4.0 / 3.0, 1e-15);
    EXPECT_THROW(JumpLaw::laplace(2.0).mgf(2.0), std::domain_error);
}

TEST(JumpLaw, MgfDomainAndMoments) {
    EXPECT_TRUE(std::isinf(JumpLaw::gaussian(1.0).mgf_sup()));
    EXPECT_DOUBLE_EQ(JumpLaw::laplace(3.0).mgf_sup(), 3.0);
    EXPECT_DOUBLE_EQ(JumpLaw::laplace(2.0).variance(), 0.5);
    EXPECT_DOUBLE_EQ(JumpLaw::laplace(2.0).mgf_prime(0.0), 0.0);
    EXPECT_NEAR(JumpLaw::laplace(2.0).mgf_second(0.0), 0.5, 1e-15);
}

TEST(JumpLaw, MgfIsConvex) {
    const auto law = JumpLaw::laplace(1.0);
    for (double u = -0.95; u < 0.95; u += 0.05) {
        const double h = 1e-3;
        const double second = law.mgf(u + h) - 2.0 * law.mgf(u) + law.mgf(u - h);
        EXPECT_GE(second, 0.0) << u;
        EXPECT_GT(law.mgf_second(u), 0.0);
    }
}

TEST(JumpLaw, DensitiesIntegrateToOneWithZeroMean) {
    for (const auto& law : {JumpLaw::gaussian(1.0), JumpLaw::laplace(1.0), JumpLaw::laplace(3.0)}) {
        // Split at the origin so the Laplace kink sits on a panel boundary.
        auto mass = [&](double a, double b) {
            return integrate([&](double z) { return law.density(z); }, a, b, {}).value;
        };
        auto moment = [&](double a, double b) {
            return integrate([&](double z) { return z * law.density(z); }, a, b, {}).value;
        };
        EXPECT_NEAR(mass(-60.0, 0.0) + mass(0.0, 60.0), 1.0, 1e-9) << law.kind_name();
        EXPECT_NEAR(moment(-60.0, 0.0) + moment(0.0, 60.0), 0.0, 1e-9) << law.kind_name();
    }
}

TEST(ConvolutionPower, GaussianFourFold) {
    const auto law = JumpLaw::gaussian(1.0);
    const UniformGrid g(40.0, 8001);
    const auto p = convolution_power(law, 4, g);
    EXPECT_NEAR(p[g.center()], 1.0 / std::sqrt(8.0 * std::numbers::pi), 1e-12);
}

TEST(ConvolutionPower, LaplaceTwoFoldMatchesBruteForce) {
    const auto law = JumpLaw::laplace(1.0);
    const UniformGrid g(40.0, (1u << 14) + 1);
    const auto p = convolution_power(law, 2, g);
    EXPECT_NEAR(oracle::laplace_pair_trapezoid(1.0, 0.0), 0.25, 1e-7);
    EXPECT_NEAR(p[g.center()], 0.25, 1e-7);
    for (std::size_t i = 0; i < g.size(); i += 731) {
        EXPECT_NEAR(p[i], oracle::laplace_pair_closed_form(g[i]), 1e-7) << g[i];
    }
}

TEST(ConvolutionPower, IdentityForOneFold) {
    for (const auto& law : {JumpLaw::gaussian(2.0), JumpLaw::laplace(1.5)}) {
        const UniformGrid g(20.0, 2001);
        const auto p = convolution_power(law, 1, g);
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(p[i], law.density(g[i]), 1e-12);
    }
}

TEST(ConvolutionPower, Semigroup) {
    const auto law = JumpLaw::laplace(1.0);
    const UniformGrid g(60.0, (1u << 14) + 1);
    const auto p2 = convolution_power(law, 2, g);
    const auto p3 = convolution_power(law, 3, g);
    const auto p5 = convolution_power(law, 5, g);
    const auto c = fft::convolve_centered(p2, p3, g.step());
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(c[i] - p5[i]));
    EXPECT_LT(worst, 1e-7);
    for (double v : p5) EXPECT_GE(v, 0.0);
}

TEST(ConvolutionPower, NarrowGridLeaks) {
    const auto law = JumpLaw::laplace(1.0);
    EXPECT_THROW(convolution_power(law, 4, UniformGrid(3.0, 601)), GridTooNarrow);
}

TEST(JumpLaw, SampleVariances) {
    const std::size_t n = 1000000;
    RandomStream a(42, 0);
    const auto lap = JumpLaw::laplace(1.0).sample(a, n);
    // Var of the sample variance for Laplace(1): (E Y^4 - sigma^4)/n = (24 - 4)/n.
    EXPECT_NEAR(sample_variance(lap), 2.0, 3.0 * std::sqrt(20.0 / n));
    RandomStream b(42, 1);
    const auto gau = JumpLaw::gaussian(4.0).sample(b, n);
    EXPECT_NEAR(sample_variance(gau), 4.0, 3.0 * std::sqrt(2.0 * 16.0 / n));
}

TEST(JumpLaw, SamplingIsDeterministic) {
    RandomStream a(3, 8), b(3, 8);
    EXPECT_EQ(JumpLaw::laplace(1.0).sample(a, 1000), JumpLaw::laplace(1.0).sample(b, 1000));
}

TEST(JumpLaw, SmoothedDensityMatchesQuadrature) {
    const auto law = JumpLaw::laplace(1.0);
    for (double z : {0.0, 0.7, 3.0}) {
        auto f = [&](double v) {
            return law.density(v) * std::exp(-0.5 * (z - v) * (z - v)) /
                   std::sqrt(2.0 * std::numbers::pi);
        };
        const double r = integrate(f, -60.0, 0.0, {}).value + integrate(f, 0.0, 60.0, {}).value;
        EXPECT_NEAR(law.smoothed_density(1.0, z), r, 1e-10) << z;
    }
}

TEST(JumpLaw, CustomLawNeedsMgf) {
    CustomJumps c;
    c.density = [](double z) { return 0.5 * std::exp(-std::abs(z)); };
    c.sampler = [](RandomStream& s) { return s.exponential(1.0) * (s.uniform() < 0.5 ? -1 : 1); };
    EXPECT_THROW(JumpLaw::custom(c), std::invalid_argument);
}

TEST(JumpLaw, RejectsInvalidParameters) {
    EXPECT_THROW(JumpLaw::gaussian(0.0), std::invalid_argument);
    EXPECT_THROW(JumpLaw::laplace(-1.0), std::invalid_argument);
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    EXPECT_THROW(JumpLaw::multivariate_gaussian(bad), std::invalid_argument);
}
