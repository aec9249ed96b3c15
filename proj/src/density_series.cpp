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

#include "jumpdiff/density_series.hpp"

#include "jumpdiff/error.hpp"
#include "jumpdiff/fft.hpp"
#include "jumpdiff/parallel.hpp"
#include "jumpdiff/tail_bounds.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace jumpdiff {

namespace {

constexpr std::size_t kMaxWorkPoints = (std::size_t{1} << 22) + 1;

double gaussian_pdf(double variance, double z) {
    return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

std::vector<double> sample_gaussian(double variance, const UniformGrid& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = gaussian_pdf(variance, grid[i]);
    return out;
}

std::vector<double> sample_law(const JumpLaw& law, const UniformGrid& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = law.density(grid[i]);
    return out;
}

std::vector<double> self_convolve(std::vector<double> base, int n, double step) {
    std::optional<std::vector<double>> result;
    while (n > 0) {
        if (n & 1) result = result ? fft::convolve_centered(*result, base, step) : base;
        n >>= 1;
        if (n > 0) base = fft::convolve_centered(base, base, step);
    }
    return std::move(*result);
}

// (N(0, variance) * phi) on the grid: closed form when available.
std::vector<double> smoothed_samples(const JumpLaw& law, double variance,
                                     const UniformGrid& grid) {
    if (law.has_smoothed_closed_form()) {
        std::vector<double> out(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out[i] = law.smoothed_density(variance, grid[i]);
        }
        return out;
    }
    auto out = fft::convolve_centered(sample_gaussian(variance, grid), sample_law(law, grid),
                                      grid.step());
    fft::clip_negative(out, grid.step());
    return out;
}

// P(|B_v + Y| > W) <= P(|B_v| > W/2) + P(|Y| > W/2).
double smoothed_leak(const JumpLaw& law, double variance, double half_width) {
    return std::erfc(0.5 * half_width / std::sqrt(2.0 * variance)) +
           law.convolution_tail_bound(1, 0.5 * half_width);
}

void require_scalar_law(const JumpLaw& law, const char* what) {
    if (law.dimension() != 1) {
        throw std::invalid_argument(std::string(what) + ": one-dimensional law required");
    }
}

}  // namespace

// --- truncation -----------------------------------------------------------

std::vector<double> poisson_weights(double mean, int max_terms) {
    if (!(mean >= 0.0) || max_terms < 0) {
        throw std::invalid_argument("poisson_weights: need mean >= 0, max_terms >= 0");
    }
    std::vector<double> w(static_cast<std::size_t>(max_terms) + 1, 0.0);
    if (mean == 0.0) {
        w[0] = 1.0;
        return w;
    }
    const double log_mean = std::log(mean);
    double log_w = -mean;
    w[0] = std::exp(log_w);
    for (int n = 1; n <= max_terms; ++n) {
        log_w += log_mean - std::log(static_cast<double>(n));
        w[static_cast<std::size_t>(n)] = std::exp(log_w);
    }
    return w;
}

double poisson_tail(double mean, int max_terms) {
    if (mean == 0.0) return 0.0;
    const double log_mean = std::log(mean);
    double log_w = -mean + max_terms * log_mean - std::lgamma(max_terms + 1.0);
    double sum = 0.0;
    const double stop = mean + 40.0 * std::sqrt(mean) + 200.0;
    for (int k = max_terms + 1;; ++k) {
        log_w += log_mean - std::log(static_cast<double>(k));
        const double term = std::exp(log_w);
        sum += term;
        if (k > mean && (term <= 1e-20 * sum || term == 0.0)) break;
        if (k > stop) break;
    }
    return sum;
}

SeriesTruncation fixed_truncation(double mean, int max_terms, double sup_factor) {
    SeriesTruncation out;
    out.max_terms = max_terms;
    out.weight_tail = poisson_tail(mean, max_terms);
    out.tail_mass_bound = out.weight_tail * sup_factor;
    return out;
}

SeriesTruncation truncate_series(double mean, double tol, double sup_factor) {
    if (!(tol > 0.0)) throw std::invalid_argument("truncate_series: tolerance must be positive");
    if (!(mean >= 0.0)) throw std::invalid_argument("truncate_series: mean must be >= 0");
    const double factor = std::max(1.0, sup_factor);
    for (int n = 0; n < 100000; ++n) {
        const double tail = poisson_tail(mean, n);
        if (tail * factor < tol) return fixed_truncation(mean, n, sup_factor);
    }
    throw std::runtime_error("truncate_series: no truncation reaches the tolerance");
}

std::string to_string(CurveMethod method) {
    switch (method) {
        case CurveMethod::closed_form: return "closed_form";
        case CurveMethod::fft_series: return "fft_series";
        case CurveMethod::kde: return "kde";
    }
    return "unknown";
}

CurveMethod curve_method_from_string(const std::string& name) {
    if (name == "closed_form") return CurveMethod::closed_form;
    if (name == "fft_series") return CurveMethod::fft_series;
    if (name == "kde") return CurveMethod::kde;
    throw std::invalid_argument("unknown curve method: " + name);
}

// --- q_t ----------------------------------------------------------------------

DensityCurve q_density(const JumpLaw& law, double t, double x, const UniformGrid& grid) {
    require_scalar_law(law, "q_density");
    if (!(t > 0.0)) throw std::invalid_argument("q_density: t must be positive");
    DensityCurve curve;
    curve.x = x;
    curve.t = t;
    curve.grid = grid;
    curve.law = law.kind_name();
    curve.grid_leak = smoothed_leak(law, t, grid.half_width());
    if (!law.has_smoothed_closed_form() && curve.grid_leak > 1e-8) {
        std::ostringstream msg;
        msg << "q_density: grid leaks mass " << curve.grid_leak;
        throw GridTooNarrow(msg.str(), curve.grid_leak);
    }
    curve.method = law.has_smoothed_closed_form() ? CurveMethod::closed_form
                                                  : CurveMethod::fft_series;
    curve.values = smoothed_samples(law, t, grid);
    curve.error_bound.assign(grid.size(), 0.0);
    return curve;
}

QBracket q_density_bounds(const GaussianHeatKernelParams& params, const JumpLaw& law, double t,
                          double x, const UniformGrid& grid) {
    if (!(params.A_T >= 1.0) || !(params.a_T >= 1.0)) {
        throw std::invalid_argument("q_density_bounds: need A_T, a_T >= 1");
    }
    const double root_a = std::sqrt(params.a_T);
    auto make = [&](double variance, double scale) {
        DensityCurve c = q_density(law, variance, x, grid);
        c.t = t;
        for (double& v : c.values) v *= scale;
        return c;
    };
    return QBracket{make(t / params.a_T, 1.0 / (params.A_T * root_a)),
                    make(t * params.a_T, params.A_T * root_a)};
}

// --- linear series --------------------------------------------------------------

double linear_density_gaussian(double variance, double jump_rate, double t, double z,
                               const SeriesTruncation& truncation) {
    const auto weights = poisson_weights(jump_rate * t, truncation.max_terms);
    std::vector<double> terms(weights.size());
    for (std::size_t n = 0; n < weights.size(); ++n) {
        terms[n] = weights[n] * gaussian_pdf(t + static_cast<double>(n) * variance, z);
    }
    return pairwise_sum(terms);
}

UniformGrid default_density_grid(const JumpLaw& law, double jump_rate, double t, double leak_tol,
                                 std::size_t points) {
    require_scalar_law(law, "default_density_grid");
    double width = 12.0 * std::sqrt(t + jump_rate * t * law.variance());
    const ThetaSolver solver(PsiFunction(1.0, jump_rate, law));
    for (int iter = 0; iter < 200 && tail_bound(solver, 0.0, t, width) > leak_tol; ++iter) {
        width *= 1.25;
    }
    return UniformGrid(width, points);
}

DensityCurve linear_density(const JumpLaw& law, double jump_rate, double t, double x,
                            const UniformGrid& grid, double tol, const SeriesOptions& options) {
    require_scalar_law(law, "linear_density");
    if (!(t > 0.0)) throw std::invalid_argument("linear_density: t must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("linear_density: tolerance must be positive");
    if (!(jump_rate >= 0.0)) throw std::invalid_argument("linear_density: rate must be >= 0");

    DensityCurve curve;
    curve.x = x;
    curve.t = t;
    curve.grid = grid;
    curve.jump_rate = jump_rate;
    curve.law = law.kind_name();
    const double sup_factor = 1.0 / std::sqrt(2.0 * std::numbers::pi * t);
    curve.truncation = truncate_series(jump_rate * t, tol, sup_factor);
    const int max_terms = curve.truncation->max_terms;
    const auto weights = poisson_weights(jump_rate * t, max_terms);
    const std::size_t m = grid.size();

    if (law.is_gaussian()) {
        const double beta = law.variance();
        double leak = 0.0;
        for (int n = 0; n <= max_terms; ++n) {
            leak += weights[static_cast<std::size_t>(n)] *
                    std::erfc(grid.half_width() / std::sqrt(2.0 * (t + n * beta)));
        }
        curve.grid_leak = leak;
        curve.method = CurveMethod::closed_form;
        curve.values.resize(m);
        std::vector<double> terms(weights.size());
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t n = 0; n < weights.size(); ++n) {
                terms[n] = weights[n] * gaussian_pdf(t + static_cast<double>(n) * beta, grid[i]);
            }
            curve.values[i] = pairwise_sum(terms);
        }
    } else {
        curve.method = CurveMethod::fft_series;
        // Work on a grid with the same step, padded until the mass outside is
        // negligible, and crop back to the requested nodes.
        const ThetaSolver solver(PsiFunction(1.0, jump_rate, law));
        std::size_t pad = 0;
        UniformGrid work = grid;
        curve.grid_leak = tail_bound(solver, 0.0, t, work.half_width());
        while (curve.grid_leak > options.leak_tolerance) {
            pad = std::max<std::size_t>(2 * pad, 64);
            if (grid.size() + 2 * pad > kMaxWorkPoints) {
                std::ostringstream msg;
                msg << "linear_density: padded grid still leaks mass " << curve.grid_leak;
                throw GridTooNarrow(msg.str(), curve.grid_leak);
            }
            work = UniformGrid(grid.half_width() + static_cast<double>(pad) * grid.step(),
                               grid.size() + 2 * pad);
            curve.grid_leak = tail_bound(solver, 0.0, t, work.half_width());
        }
        const double step = work.step();
        std::vector<std::vector<double>> terms(weights.size());
        parallel_for(weights.size(), options.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t n = begin; n < end; ++n) {
                if (n == 0) {
                    terms[n] = sample_gaussian(t, work);
                } else if (law.has_smoothed_closed_form()) {
                    // Phi_t * phi^{*n} = (Phi_{t/n} * phi)^{*n}; every factor is smooth.
                    terms[n] = self_convolve(smoothed_samples(law, t / static_cast<double>(n), work),
                                             static_cast<int>(n), step);
                } else {
                    terms[n] = fft::convolve_centered(sample_gaussian(t, work),
                                                      convolution_power(law, static_cast<int>(n), work),
                                                      step);
                }
            }
        });
        std::vector<double> full(work.size());
        std::vector<double> column(weights.size());
        for (std::size_t i = 0; i < work.size(); ++i) {
            for (std::size_t n = 0; n < weights.size(); ++n) column[n] = weights[n] * terms[n][i];
            full[i] = pairwise_sum(column);
        }
        const double clipped = fft::clip_negative(full, step);
        curve.values.assign(full.begin() + static_cast<std::ptrdiff_t>(pad),
                            full.begin() + static_cast<std::ptrdiff_t>(pad + m));
        if (clipped > 1e-9) {
            throw RingingError("linear_density: negative FFT mass exceeds tolerance");
        }
    }
    curve.error_bound.assign(m, curve.truncation->tail_mass_bound);
    return curve;
}

RadialDensity linear_density_multid(const JumpLaw& law, double jump_rate, double t,
                                    std::span<const double> radii, double tol,
                                    std::span<const double> direction) {
    const auto* mvn = std::get_if<MultivariateGaussianJumps>(&law.parameters());
    if (mvn == nullptr) {
        throw std::invalid_argument("linear_density_multid: multivariate Gaussian law required");
    }
    if (!(t > 0.0)) throw std::invalid_argument("linear_density_multid: t must be positive");
    const auto d = mvn->covariance.rows();
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(d);
    if (direction.empty()) {
        unit(0) = 1.0;
    } else {
        if (static_cast<Eigen::Index>(direction.size()) != d) {
            throw std::invalid_argument("linear_density_multid: direction dimension mismatch");
        }
        for (Eigen::Index i = 0; i < d; ++i) unit(i) = direction[static_cast<std::size_t>(i)];
        unit.normalize();
    }
    RadialDensity out;
    const double dd = static_cast<double>(d);
    out.truncation =
        truncate_series(jump_rate * t, tol, std::pow(2.0 * std::numbers::pi * t, -0.5 * dd));
    const auto weights = poisson_weights(jump_rate * t, out.truncation.max_terms);

    struct Term {
        Eigen::MatrixXd lower;
        double log_norm;
    };
    std::vector<Term> terms;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const Eigen::MatrixXd cov = t * Eigen::MatrixXd::Identity(d, d) +
                                    static_cast<double>(n) * mvn->covariance;
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        const Eigen::MatrixXd lower = llt.matrixL();
        const double log_det = 2.0 * lower.diagonal().array().log().sum();
        terms.push_back({lower, -0.5 * log_det - 0.5 * dd * std::log(2.0 * std::numbers::pi)});
    }
    std::vector<double> column(weights.size());
    for (double r : radii) {
        const Eigen::VectorXd z = r * unit;
        for (std::size_t n = 0; n < weights.size(); ++n) {
            const Eigen::VectorXd w = terms[n].lower.triangularView<Eigen::Lower>().solve(z);
            column[n] = weights[n] * std::exp(terms[n].log_norm - 0.5 * w.squaredNorm());
        }
        out.radii.push_back(r);
        out.values.push_back(pairwise_sum(column));
    }
    return out;
}

std::vector<double> convolve_curves(const DensityCurve& a, const DensityCurve& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("convolve_curves: curves use different grids");
    auto out = fft::convolve_centered(a.values, b.values, a.grid.step());
    fft::clip_negative(out, a.grid.step());
    return out;
}

}  // namespace jumpdiff
