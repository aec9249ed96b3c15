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

#include "jumpdiff/grid.hpp"
#include "jumpdiff/jump_law.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jumpdiff {

/// Truncation of the Poisson-weighted series at n = max_terms.
struct SeriesTruncation {
    int max_terms = 0;
    /// Neglected Poisson weight e^{-m} sum_{n > max_terms} m^n / n!.
    double weight_tail = 0.0;
    /// weight_tail times the sup of the per-term densities.
    double tail_mass_bound = 0.0;
};

/// Poisson weights e^{-m} m^n / n!, n = 0..max_terms, by upward recursion
/// in log space.
std::vector<double> poisson_weights(double mean, int max_terms);
/// Exact neglected weight after max_terms (forward summation of the tail).
double poisson_tail(double mean, int max_terms);
/// Smallest max_terms with weight_tail * max(1, sup_factor) < tol.
SeriesTruncation truncate_series(double mean, double tol, double sup_factor);
SeriesTruncation fixed_truncation(double mean, int max_terms, double sup_factor);

enum class CurveMethod { closed_form, fft_series, kde };
std::string to_string(CurveMethod method);
CurveMethod curve_method_from_string(const std::string& name);

/// Sampled transition density y -> f_t(x, y) on y = x + grid.
struct DensityCurve {
    double x = 0.0;
    double t = 0.0;
    UniformGrid grid;
    std::vector<double> values;
    CurveMethod method = CurveMethod::closed_form;
    /// Per-point bound on the value error (series: truncation; kde: 95% CI).
    std::vector<double> error_bound;
    /// 95% confidence half widths, KDE only.
    std::vector<double> ci_half_width;
    std::optional<SeriesTruncation> truncation;
    /// Bound on the probability mass outside the grid.
    double grid_leak = 0.0;
    /// KDE only: density contributed by one sample at its own location.
    double resolution = 0.0;
    double jump_rate = 0.0;
    std::string law;

    double y(std::size_t i) const { return x + grid[i]; }
    double integral() const { return trapezoid(values, grid.step()); }
};

/// q_t = N(0, t) * phi (exact heat kernel, b = 0, sigma = 1). Closed form
/// for Gaussian and Laplace laws, FFT convolution otherwise. Independent of
/// the jump rate.
DensityCurve q_density(const JumpLaw& law, double t, double x, const UniformGrid& grid);

/// Heat-kernel bound constants A_T, a_T >= 1.
struct GaussianHeatKernelParams {
    double A_T = 1.0;
    double a_T = 1.0;
};

/// q_t bracket implied by the Gaussian bounds on p_t:
/// lower = (1/(A sqrt a)) N(0, t/a) * phi, upper = A sqrt(a) N(0, a t) * phi.
struct QBracket {
    DensityCurve lower;
    DensityCurve upper;
};
QBracket q_density_bounds(const GaussianHeatKernelParams& params, const JumpLaw& law, double t,
                          double x, const UniformGrid& grid);

struct SeriesOptions {
    double leak_tolerance = 1e-8;
    unsigned threads = 0;
};

/// f_t(x, .) for b = 0, sigma = 1:
/// e^{-lambda t} sum_n (Phi_t * phi^{*n})(y - x) (lambda t)^n / n!.
/// Gaussian laws sum closed-form terms; other laws use FFT convolution on a
/// grid with the same step, padded until the tail bound outside it is below
/// options.leak_tolerance, then cropped to `grid`.
DensityCurve linear_density(const JumpLaw& law, double jump_rate, double t, double x,
                            const UniformGrid& grid, double tol,
                            const SeriesOptions& options = {});

/// Pointwise closed-form series value for a Gaussian law at z = y - x.
double linear_density_gaussian(double variance, double jump_rate, double t, double z,
                               const SeriesTruncation& truncation);

/// Grid wide enough that the tail of X_t - x outside it is below leak_tol.
UniformGrid default_density_grid(const JumpLaw& law, double jump_rate, double t,
                                 double leak_tol = 1e-10, std::size_t points = (1u << 14) + 1);

struct RadialDensity {
    std::vector<double> radii;
    std::vector<double> values;
    SeriesTruncation truncation;
};

/// Multivariate Gaussian jumps, b = 0, sigma = I: term n is N(0, tI + n Sigma),
/// evaluated at y - x = r * direction (unit vector; default e_1).
RadialDensity linear_density_multid(const JumpLaw& law, double jump_rate, double t,
                                    std::span<const double> radii, double tol,
                                    std::span<const double> direction = {});

/// Linear FFT convolution of two curves on the same grid (Chapman-Kolmogorov).
std::vector<double> convolve_curves(const DensityCurve& a, const DensityCurve& b);

}  // namespace jumpdiff
