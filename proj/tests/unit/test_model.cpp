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

#include "jumpdiff/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace jumpdiff;

TEST(Model, LinearModelPassesValidation) {
    const auto spec = ModelSpec::linear(1, 0.0, JumpLaw::gaussian(1.0));
    EXPECT_TRUE(spec.is_linear());
    const auto report = validate_model(spec, {{-10.0}, {0.0}, {10.0}});
    EXPECT_TRUE(report.passed());
    EXPECT_DOUBLE_EQ(spec.drift_bound, 0.0);
    EXPECT_DOUBLE_EQ(spec.diffusion_bound, 1.0);
    EXPECT_DOUBLE_EQ(spec.ellipticity, 1.0);
}

TEST(Model, UnderdeclaredDiffusionBoundFails) {
    auto spec = ModelSpec::create(DriftField::zero(1),
                                  DiffusionField::diagonal({TrigonometricFamily{2.0, 1.0}}), 0.0,
                                  JumpLaw::gaussian(1.0), 1.0, 0.0, 2.0, 1.0);
    const auto report = validate_model(spec, probe_line(-10.0, 10.0, 201));
    EXPECT_FALSE(report.passed());
    const auto& check = report.check("diffusion_bound");
    EXPECT_FALSE(check.passed);
    ASSERT_EQ(check.witness.size(), 1u);
    EXPECT_GT(std::sin(check.witness[0]), 0.0);
    EXPECT_TRUE(report.check("drift_bound").passed);
}

TEST(Model, TrigonometricCoefficientsPass) {
    auto spec = ModelSpec::create(
        DriftField::componentwise({TrigonometricFamily{0.0, 0.3, 1.0, 0.0, true}}),
        DiffusionField::diagonal({TrigonometricFamily{1.0, 0.5}}), 1.0, JumpLaw::laplace(1.0),
        1.0, 0.3, 1.5, 0.25);
    const auto report = validate_model(spec, probe_line(-20.0, 20.0, 4001));
    EXPECT_TRUE(report.passed());
    EXPECT_LE(report.check("drift_bound").worst, 0.3);
    EXPECT_GE(report.check("ellipticity").worst, 0.25);
}

TEST(Model, DerivedBoundsFromCatalog) {
    auto spec = ModelSpec::create(
        DriftField::componentwise({TrigonometricFamily{0.0, 0.3, 1.0, 0.0, true}}),
        DiffusionField::diagonal({TrigonometricFamily{1.0, 0.5}}), 1.0, JumpLaw::laplace(1.0),
        1.0);
    EXPECT_NEAR(spec.drift_bound, 0.3, 1e-15);
    EXPECT_NEAR(spec.diffusion_bound, 1.5, 1e-15);
    EXPECT_NEAR(spec.ellipticity, 0.25, 1e-15);
    EXPECT_FALSE(spec.is_linear());
}

TEST(Model, AffineClampedFamily) {
    const ScalarFamily f = AffineClampedFamily{0.5, 2.0, -1.0, 3.0};
    EXPECT_DOUBLE_EQ(evaluate(f, 0.0), 0.5);
    EXPECT_DOUBLE_EQ(evaluate(f, 10.0), 3.0);
    EXPECT_DOUBLE_EQ(evaluate(f, -10.0), -1.0);
    EXPECT_DOUBLE_EQ(sup_abs(f), 3.0);
    EXPECT_DOUBLE_EQ(inf_abs(f), 0.0);
}

TEST(Model, LipschitzMarginTightensCheck) {
    auto spec = ModelSpec::create(DriftField::componentwise({TrigonometricFamily{0.0, 0.3}}),
                                  DiffusionField::identity(1), 0.0, JumpLaw::gaussian(1.0), 1.0,
                                  0.3, 1.0, 1.0);
    ValidationOptions loose;
    EXPECT_TRUE(validate_model(spec, probe_line(-5.0, 5.0, 101), loose).passed());
    ValidationOptions strict;
    strict.drift_lipschitz = 0.3;
    strict.spacing = 0.1;
    EXPECT_FALSE(validate_model(spec, probe_line(-5.0, 5.0, 101), strict).passed());
}

TEST(Model, CallbackRequiresDeclaredBounds) {
    auto drift = DriftField::callback(1, [](auto, auto out) { out[0] = 0.0; });
    EXPECT_THROW(ModelSpec::create(drift, DiffusionField::identity(1), 0.0,
                                   JumpLaw::gaussian(1.0), 1.0),
                 std::invalid_argument);
    EXPECT_NO_THROW(ModelSpec::create(drift, DiffusionField::identity(1), 0.0,
                                      JumpLaw::gaussian(1.0), 1.0, 0.0));
}

TEST(Model, RejectsBadParameters) {
    auto spec = ModelSpec::linear(1, 1.0, JumpLaw::gaussian(1.0));
    spec.jump_rate = -1.0;
    EXPECT_THROW(check_parameters(spec), std::invalid_argument);
    spec = ModelSpec::linear(1, 1.0, JumpLaw::gaussian(1.0));
    spec.horizon = 0.0;
    EXPECT_THROW(check_parameters(spec), std::invalid_argument);
    EXPECT_THROW(ModelSpec::linear(4, 1.0, JumpLaw::gaussian(1.0)), std::invalid_argument);
    EXPECT_THROW(ModelSpec::linear(2, 1.0, JumpLaw::gaussian(1.0)), std::invalid_argument);
}

TEST(Model, ValidationIsDeterministic) {
    auto spec = ModelSpec::create(DriftField::zero(1),
                                  DiffusionField::diagonal({TrigonometricFamily{1.0, 0.5}}), 0.0,
                                  JumpLaw::gaussian(1.0), 1.0);
    const auto probes = probe_line(-3.0, 3.0, 61);
    const auto a = validate_model(spec, probes);
    const auto b = validate_model(spec, probes);
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        EXPECT_EQ(a.checks[i].worst, b.checks[i].worst);
    }
}
