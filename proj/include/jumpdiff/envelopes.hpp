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
#include "jumpdiff/jump_law.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jumpdiff {

enum class EnvelopeKind { gaussian_jump, laplace_jump };
enum class Side { lower, upper };
enum class CalibrationSource { fitted, user };

std::string to_string(EnvelopeKind kind);
EnvelopeKind envelope_kind_from_string(const std::string& name);
std::string to_string(CalibrationSource source);
CalibrationSource calibration_source_from_string(const std::string& name);

struct EnvelopeConstants {
    double A_T = 1.0;
    double a_T = 1.0;
    double C_T = 2.0;
    double c_T = 2.0;
    double q = 2.0;
    double C_qT = 1.0;
};

/// Grid and times on which containment was verified.
struct ValidityRegion {
    UniformGrid grid;
    std::vector<double> times;
    double x = 0.0;
    double tolerance = 0.0;
};

/// Parameters of the exponential-martingale tail bound used for C_qT.
struct TailModel {
    double drift_bound = 0.0;
    double diffusion_bound = 1.0;
    double jump_rate = 0.0;
    JumpLaw law = JumpLaw::gaussian(1.0);
};

struct EnvelopeSet {
    EnvelopeKind kind = EnvelopeKind::gaussian_jump;
    int dimension = 1;
    EnvelopeConstants constants;
    double horizon = 1.0;
    CalibrationSource calibration = CalibrationSource::user;
    std::optional<ValidityRegion> validity;
    std::optional<TailModel> tail_model;

    /// Throws std::invalid_argument unless C_T, c_T > 1 and A_T, a_T >= 1.
    void validate() const;
};

/// max(ln x, 0); 0 for x <= 0.
double ln_plus(double x);

/// Gaussian-jump shape: lower C^{-1}(e^{-c r sqrt(ln+(r/t))} + 1{r=0}/sqrt t),
/// upper (C/sqrt t) e^{-r sqrt(ln+(r/t))/c}. No range checks on C, c.
double gaussian_envelope(double C, double c, double t, double r, Side side);
/// Laplace-jump shape: exponents -c r (lower) and -r/c (upper).
double laplace_envelope(double C, double c, double t, double r, Side side);

/// Evaluators on a set; t must lie in (0, horizon] and r >= 0.
double gaussian_envelope(const EnvelopeSet& set, double t, double r, Side side);
double laplace_envelope(const EnvelopeSet& set, double t, double r, Side side);
double envelope(const EnvelopeSet& set, double t, double r, Side side);

/// e^{-lambda t} sum_{n<=N} C^{n+1} / sqrt(2 pi (t/a + n beta))
///   * exp(-r^2 / (2 (t/a + n beta))) (lambda t)^n / n!,  C = 1/(A sqrt a).
double gaussian_lower_series(double A_T, double a_T, double beta, double jump_rate, double t,
                             double r, int max_terms);

/// d-dimensional version, terms n = 1..N:
/// C^{n+1} / ((2 pi)^{d/2} n^{d/2} sqrt det(Sigma + T/a I)) e^{-r^2 |Sigma^{-1}| / (2n)}
/// times the Poisson weight, C = 1/(A a^{d/2}); at r = 0 the heat-kernel term
/// e^{-lambda t} / (A (2 pi t)^{d/2}) is added.
double gaussian_lower_series_multid(double A_T, double a_T, const Eigen::MatrixXd& covariance,
                                    double jump_rate, double t, double r, int max_terms,
                                    double horizon);

/// heat_term 1{r=0} + prefactor e^{-decay_rate r}.
struct LaplaceLowerBound {
    double heat_term = 0.0;
    double prefactor = 0.0;
    double decay_rate = 0.0;

    double operator()(double r) const;
};

/// Lower bound for Laplace (d = 1) or product-Laplace jumps with rates mu.
LaplaceLowerBound laplace_lower_bound(double A_T, double a_T, std::span<const double> rates,
                                      double jump_rate, double t, double horizon);

struct CalibrationOptions {
    double safety = 1.1;
    double c_min = 1.0;
    double c_max = 1e3;
    std::size_t scan_points = 241;
    double A_T = 1.0;
    double a_T = 1.0;
    double q = 2.0;
    std::optional<TailModel> tail_model;
};

/// Smallest (C_T, c_T) such that lower <= value and value + error_bound <= upper
/// at every node of every reference curve, then scaled by the safety factor.
/// All curves must share one grid and origin; horizon >= every t.
EnvelopeSet calibrate(EnvelopeKind kind, std::span<const DensityCurve> references, double horizon,
                      const CalibrationOptions& options = {});

/// Closed-form or FFT references from linear_density on `grid` at each time.
EnvelopeSet calibrate_linear(const JumpLaw& law, double jump_rate, std::span<const double> times,
                             const UniformGrid& grid, double horizon,
                             const CalibrationOptions& options = {}, double tol = 1e-12);

struct ContainmentRow {
    double t = 0.0;
    double r = 0.0;
    double lower = 0.0;
    double value = 0.0;
    double upper = 0.0;
    double margin = 0.0;
    bool pass = true;
};

struct ContainmentReport {
    std::vector<ContainmentRow> rows;
    double worst_margin = 0.0;
    std::size_t violations = 0;
    std::optional<ContainmentRow> first_violation;

    bool passed() const { return violations == 0; }
};

struct ContainmentOptions {
    /// Slack multiplier on ci_half_width for KDE curves.
    double ci_multiplier = 3.0;
};

/// Per-node check lower - slack <= value <= upper + slack. Series curves use
/// slack = error_bound; KDE curves use ci_multiplier * ci_half_width plus the
/// single-sample resolution. margin = min(value + slack - lower,
/// upper - value + slack).
ContainmentReport check_containment(const EnvelopeSet& set, const DensityCurve& curve,
                                    const ContainmentOptions& options = {});

}  // namespace jumpdiff
