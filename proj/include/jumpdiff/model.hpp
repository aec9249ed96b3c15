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

#include "jumpdiff/jump_law.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace jumpdiff {

inline constexpr int kMaxDimension = 3;

/// Scalar coefficient families with known sup/inf bounds.
struct ConstantFamily {
    double value;
};

/// clamp(intercept + slope * x, lower, upper).
struct AffineClampedFamily {
    double intercept;
    double slope;
    double lower;
    double upper;
};

/// base + amplitude * sin(frequency * x + phase), or cos when `cosine`.
struct TrigonometricFamily {
    double base;
    double amplitude;
    double frequency = 1.0;
    double phase = 0.0;
    bool cosine = false;
};

using ScalarFamily = std::variant<ConstantFamily, AffineClampedFamily, TrigonometricFamily>;

double evaluate(const ScalarFamily& family, double x);
double sup_abs(const ScalarFamily& family);
/// Lower bound of |f| (0 when the family may vanish).
double inf_abs(const ScalarFamily& family);

/// Drift b: component i is a catalog family of x_i, or an opaque callback.
class DriftField {
public:
    using Callback = std::function<void(std::span<const double>, std::span<double>)>;

    static DriftField zero(int dimension);
    static DriftField componentwise(std::vector<ScalarFamily> components);
    static DriftField callback(int dimension, Callback fn);

    int dimension() const { return dimension_; }
    bool is_catalog() const { return !callback_; }
    bool is_zero() const;
    void operator()(std::span<const double> x, std::span<double> out) const;
    /// Upper bound of sup |b| for catalog fields.
    double derived_bound() const;

private:
    int dimension_ = 1;
    std::vector<ScalarFamily> components_;
    Callback callback_;
};

/// Diffusion sigma: a constant matrix, a diagonal of catalog families of the
/// matching coordinate, or an opaque callback writing a row-major d x d matrix.
class DiffusionField {
public:
    using Callback = std::function<void(std::span<const double>, std::span<double>)>;

    static DiffusionField identity(int dimension);
    static DiffusionField constant(std::vector<double> row_major, int dimension);
    static DiffusionField diagonal(std::vector<ScalarFamily> entries);
    static DiffusionField callback(int dimension, Callback fn);

    int dimension() const { return dimension_; }
    bool is_catalog() const { return !callback_; }
    bool is_identity() const;
    bool is_constant() const { return !callback_ && !constant_.empty(); }
    void operator()(std::span<const double> x, std::span<double> out) const;
    /// Upper bound of the operator norm (catalog fields).
    double derived_bound() const;
    /// Lower bound of inf |sigma xi|^2 over unit xi (catalog fields).
    double derived_ellipticity() const;

private:
    int dimension_ = 1;
    std::vector<double> constant_;
    std::vector<ScalarFamily> diagonal_;
    Callback callback_;
};

/// Jump diffusion dX = b(X) dt + sigma(X) dB + dJ with compound Poisson J.
struct ModelSpec {
    int dimension = 1;
    DriftField drift = DriftField::zero(1);
    DiffusionField diffusion = DiffusionField::identity(1);
    double drift_bound = 0.0;      // c1 >= sup |b|
    double diffusion_bound = 1.0;  // c2 >= sup ||sigma||
    double ellipticity = 1.0;      // rho <= inf |sigma xi|^2
    double jump_rate = 0.0;        // lambda
    JumpLaw jump_law = JumpLaw::gaussian(1.0);
    double horizon = 1.0;          // T

    /// b = 0, sigma = I.
    static ModelSpec linear(int dimension, double jump_rate, JumpLaw law, double horizon = 1.0);

    /// Catalog fields with bounds derived from the families. Callback fields
    /// must declare c1, c2 and rho.
    static ModelSpec create(DriftField drift, DiffusionField diffusion, double jump_rate,
                            JumpLaw law, double horizon,
                            std::optional<double> drift_bound = std::nullopt,
                            std::optional<double> diffusion_bound = std::nullopt,
                            std::optional<double> ellipticity = std::nullopt);

    bool is_linear() const { return drift.is_zero() && diffusion.is_identity(); }
};

/// Rejects d outside [1, kMaxDimension], lambda < 0, rho <= 0, c2 <= 0,
/// c1 < 0, T <= 0 and mismatched field or law dimensions.
void check_parameters(const ModelSpec& spec);

struct AssumptionCheck {
    std::string name;
    bool passed = true;
    double bound = 0.0;        // declared constant
    double worst = 0.0;        // worst probed value
    std::vector<double> witness;  // first failing probe point, if any
};

struct ValidationReport {
    std::vector<AssumptionCheck> checks;
    bool passed() const;
    const AssumptionCheck& check(const std::string& name) const;
};

struct ValidationOptions {
    /// Declared Lipschitz constants and probe spacing. A probe value must sit
    /// inside its bound by lipschitz * spacing so that passing on the grid
    /// implies passing everywhere in between.
    double drift_lipschitz = 0.0;
    double diffusion_lipschitz = 0.0;
    double spacing = 0.0;
};

/// Probe-grid check of |b| <= c1, ||sigma|| <= c2 and inf |sigma xi|^2 >= rho.
/// Deterministic and side-effect free.
ValidationReport validate_model(const ModelSpec& spec,
                                const std::vector<std::vector<double>>& probes,
                                const ValidationOptions& options = {});

/// Uniform 1-d probe points lo, ..., hi.
std::vector<std::vector<double>> probe_line(double lo, double hi, std::size_t count);

}  // namespace jumpdiff
