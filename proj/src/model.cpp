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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumpdiff {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dimension(int d) {
    if (d < 1 || d > kMaxDimension) {
        throw std::invalid_argument("dimension must be in [1, " +
                                    std::to_string(kMaxDimension) + "]");
    }
}

// Extreme singular values of a row-major d x d matrix.
std::pair<double, double> singular_range(std::span<const double> m, int d) {
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = m[static_cast<std::size_t>(i * d + j)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    return {s.minCoeff(), s.maxCoeff()};
}

bool within(double value, double bound) {
    return value <= bound + 1e-12 * std::max(1.0, std::abs(bound));
}

}  // namespace

double evaluate(const ScalarFamily& family, double x) {
    return std::visit(
        Overloaded{
            [](const ConstantFamily& f) { return f.value; },
            [x](const AffineClampedFamily& f) {
                return std::clamp(f.intercept + f.slope * x, f.lower, f.upper);
            },
            [x](const TrigonometricFamily& f) {
                const double arg = f.frequency * x + f.phase;
                return f.base + f.amplitude * (f.cosine ? std::cos(arg) : std::sin(arg));
            },
        },
        family);
}

double sup_abs(const ScalarFamily& family) {
    return std::visit(
        Overloaded{
            [](const ConstantFamily& f) { return std::abs(f.value); },
            [](const AffineClampedFamily& f) {
                if (f.slope == 0.0) return std::abs(std::clamp(f.intercept, f.lower, f.upper));
                return std::max(std::abs(f.lower), std::abs(f.upper));
            },
            [](const TrigonometricFamily& f) {
                return std::abs(f.base) + (f.frequency == 0.0 ? 0.0 : std::abs(f.amplitude));
            },
        },
        family);
}

double inf_abs(const ScalarFamily& family) {
    return std::visit(
        Overloaded{
            [](const ConstantFamily& f) { return std::abs(f.value); },
            [](const AffineClampedFamily& f) {
                if (f.slope == 0.0) return std::abs(std::clamp(f.intercept, f.lower, f.upper));
                if (f.lower <= 0.0 && f.upper >= 0.0) return 0.0;
                return std::min(std::abs(f.lower), std::abs(f.upper));
            },
            [](const TrigonometricFamily& f) {
                return std::max(0.0, std::abs(f.base) - std::abs(f.amplitude));
            },
        },
        family);
}

// --- DriftField ---------------------------------------------------------

DriftField DriftField::zero(int dimension) {
    require_dimension(dimension);
    return componentwise(std::vector<ScalarFamily>(static_cast<std::size_t>(dimension),
                                                   ConstantFamily{0.0}));
}

DriftField DriftField::componentwise(std::vector<ScalarFamily> components) {
    require_dimension(static_cast<int>(components.size()));
    DriftField field;
    field.dimension_ = static_cast<int>(components.size());
    field.components_ = std::move(components);
    return field;
}

DriftField DriftField::callback(int dimension, Callback fn) {
    require_dimension(dimension);
    if (!fn) throw std::invalid_argument("DriftField: empty callback");
    DriftField field;
    field.dimension_ = dimension;
    field.callback_ = std::move(fn);
    return field;
}

bool DriftField::is_zero() const {
    if (callback_) return false;
    return std::all_of(components_.begin(), components_.end(), [](const ScalarFamily& f) {
        const auto* c = std::get_if<ConstantFamily>(&f);
        return c != nullptr && c->value == 0.0;
    });
}

void DriftField::operator()(std::span<const double> x, std::span<double> out) const {
    if (callback_) {
        callback_(x, out);
        return;
    }
    for (std::size_t i = 0; i < components_.size(); ++i) out[i] = evaluate(components_[i], x[i]);
}

double DriftField::derived_bound() const {
    if (callback_) throw std::logic_error("DriftField: callback bounds must be declared");
    double sum = 0.0;
    for (const auto& f : components_) sum += sup_abs(f) * sup_abs(f);
    return std::sqrt(sum);
}

// --- DiffusionField -----------------------------------------------------

DiffusionField DiffusionField::identity(int dimension) {
    require_dimension(dimension);
    std::vector<double> m(static_cast<std::size_t>(dimension * dimension), 0.0);
    for (int i = 0; i < dimension; ++i) m[static_cast<std::size_t>(i * dimension + i)] = 1.0;
    return constant(std::move(m), dimension);
}

DiffusionField DiffusionField::constant(std::vector<double> row_major, int dimension) {
    require_dimension(dimension);
    if (row_major.size() != static_cast<std::size_t>(dimension * dimension)) {
        throw std::invalid_argument("DiffusionField: matrix size does not match dimension");
    }
    DiffusionField field;
    field.dimension_ = dimension;
    field.constant_ = std::move(row_major);
    return field;
}

DiffusionField DiffusionField::diagonal(std::vector<ScalarFamily> entries) {
    require_dimension(static_cast<int>(entries.size()));
    DiffusionField field;
    field.dimension_ = static_cast<int>(entries.size());
    field.diagonal_ = std::move(entries);
    return field;
}

DiffusionField DiffusionField::callback(int dimension, Callback fn) {
    require_dimension(dimension);
    if (!fn) throw std::invalid_argument("DiffusionField: empty callback");
    DiffusionField field;
    field.dimension_ = dimension;
    field.callback_ = std::move(fn);
    return field;
}

bool DiffusionField::is_identity() const {
    if (callback_ || constant_.empty()) return false;
    for (int i = 0; i < dimension_; ++i)
        for (int j = 0; j < dimension_; ++j)
            if (constant_[static_cast<std::size_t>(i * dimension_ + j)] != (i == j ? 1.0 : 0.0))
                return false;
    return true;
}

void DiffusionField::operator()(std::span<const double> x, std::span<double> out) const {
    if (callback_) {
        callback_(x, out);
        return;
    }
    if (!constant_.empty()) {
        std::copy(constant_.begin(), constant_.end(), out.begin());
        return;
    }
    const auto d = static_cast<std::size_t>(dimension_);
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(d * d), 0.0);
    for (std::size_t i = 0; i < d; ++i) out[i * d + i] = evaluate(diagonal_[i], x[i]);
}

double DiffusionField::derived_bound() const {
    if (callback_) throw std::logic_error("DiffusionField: callback bounds must be declared");
    if (!constant_.empty()) return singular_range(constant_, dimension_).second;
    double bound = 0.0;
    for (const auto& f : diagonal_) bound = std::max(bound, sup_abs(f));
    return bound;
}

double DiffusionField::derived_ellipticity() const {
    if (callback_) throw std::logic_error("DiffusionField: callback bounds must be declared");
    if (!constant_.empty()) {
        const double smallest = singular_range(constant_, dimension_).first;
        return smallest * smallest;
    }
    double rho = std::numeric_limits<double>::infinity();
    for (const auto& f : diagonal_) rho = std::min(rho, inf_abs(f) * inf_abs(f));
    return rho;
}

// --- ModelSpec ----------------------------------------------------------

ModelSpec ModelSpec::linear(int dimension, double jump_rate, JumpLaw law, double horizon) {
    return create(DriftField::zero(dimension), DiffusionField::identity(dimension), jump_rate,
                  std::move(law), horizon);
}

ModelSpec ModelSpec::create(DriftField drift, DiffusionField diffusion, double jump_rate,
                            JumpLaw law, double horizon, std::optional<double> drift_bound,
                            std::optional<double> diffusion_bound,
                            std::optional<double> ellipticity) {
    ModelSpec spec{.dimension = drift.dimension(),
                   .drift = std::move(drift),
                   .diffusion = std::move(diffusion),
                   .jump_rate = jump_rate,
                   .jump_law = std::move(law),
                   .horizon = horizon};
    if (!drift_bound && !spec.drift.is_catalog()) {
        throw std::invalid_argument("ModelSpec: callback drift requires a declared c1");
    }
    if ((!diffusion_bound || !ellipticity) && !spec.diffusion.is_catalog()) {
        throw std::invalid_argument("ModelSpec: callback diffusion requires declared c2 and rho");
    }
    spec.drift_bound = drift_bound ? *drift_bound : spec.drift.derived_bound();
    spec.diffusion_bound = diffusion_bound ? *diffusion_bound : spec.diffusion.derived_bound();
    spec.ellipticity = ellipticity ? *ellipticity : spec.diffusion.derived_ellipticity();
    check_parameters(spec);
    return spec;
}

void check_parameters(const ModelSpec& spec) {
    require_dimension(spec.dimension);
    if (spec.drift.dimension() != spec.dimension ||
        spec.diffusion.dimension() != spec.dimension ||
        spec.jump_law.dimension() != spec.dimension) {
        throw std::invalid_argument("model: drift, diffusion and jump law dimensions differ");
    }
    if (!(spec.jump_rate >= 0.0)) throw std::invalid_argument("model: jump rate must be >= 0");
    if (!(spec.ellipticity > 0.0)) throw std::invalid_argument("model: ellipticity must be > 0");
    if (!(spec.diffusion_bound > 0.0)) {
        throw std::invalid_argument("model: diffusion bound must be > 0");
    }
    if (!(spec.drift_bound >= 0.0)) throw std::invalid_argument("model: drift bound must be >= 0");
    if (!(spec.horizon > 0.0)) throw std::invalid_argument("model: horizon must be > 0");
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AssumptionCheck& c) { return c.passed; });
}

const AssumptionCheck& ValidationReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("ValidationReport: no check named " + name);
}

ValidationReport validate_model(const ModelSpec& spec,
                                const std::vector<std::vector<double>>& probes,
                                const ValidationOptions& options) {
    check_parameters(spec);
    if (probes.empty()) throw std::invalid_argument("validate_model: no probe points");
    const int d = spec.dimension;
    const auto du = static_cast<std::size_t>(d);

    AssumptionCheck drift{"drift_bound", true, spec.drift_bound, 0.0, {}};
    AssumptionCheck diffusion{"diffusion_bound", true, spec.diffusion_bound, 0.0, {}};
    AssumptionCheck ellipticity{"ellipticity", true, spec.ellipticity,
                                std::numeric_limits<double>::infinity(), {}};
    const double drift_margin = options.drift_lipschitz * options.spacing;
    const double diffusion_margin = options.diffusion_lipschitz * options.spacing;

    std::vector<double> b(du);
    std::vector<double> sigma(du * du);
    for (const auto& x : probes) {
        if (x.size() != du) throw std::invalid_argument("validate_model: probe dimension mismatch");
        spec.drift(x, b);
        spec.diffusion(x, sigma);
        double norm = 0.0;
        for (double v : b) norm += v * v;
        norm = std::sqrt(norm);
        const auto [smallest, largest] = singular_range(sigma, d);

        drift.worst = std::max(drift.worst, norm);
        if (drift.passed && !within(norm + drift_margin, spec.drift_bound)) {
            drift.passed = false;
            drift.witness = x;
        }
        diffusion.worst = std::max(diffusion.worst, largest);
        if (diffusion.passed && !within(largest + diffusion_margin, spec.diffusion_bound)) {
            diffusion.passed = false;
            diffusion.witness = x;
        }
        const double lowest = std::max(0.0, smallest - diffusion_margin);
        ellipticity.worst = std::min(ellipticity.worst, smallest * smallest);
        if (ellipticity.passed && !within(spec.ellipticity, lowest * lowest)) {
            ellipticity.passed = false;
            ellipticity.witness = x;
        }
    }
    return ValidationReport{{drift, diffusion, ellipticity}};
}

std::vector<std::vector<double>> probe_line(double lo, double hi, std::size_t count) {
    if (count == 0) throw std::invalid_argument("probe_line: count must be positive");
    std::vector<std::vector<double>> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double s = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = {lo + s * (hi - lo)};
    }
    return out;
}

}  // namespace jumpdiff
