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
#include "jumpdiff/random.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace jumpdiff {

struct GaussianJumps {
    double variance;
};

/// Density mu/2 * exp(-mu |z|).
struct LaplaceJumps {
    double rate;
};

struct ProductLaplaceJumps {
    std::vector<double> rates;
};

struct MultivariateGaussianJumps {
    Eigen::MatrixXd covariance;
    Eigen::MatrixXd cholesky;  // lower factor, filled by the factory
};

/// User-supplied one-dimensional law. The MGF and its first two derivatives
/// are mandatory and must be valid on (-mgf_sup, mgf_sup).
struct CustomJumps {
    std::function<double(double)> density;
    std::function<double(RandomStream&)> sampler;
    std::function<double(double)> mgf;
    std::function<double(double)> mgf_prime;
    std::function<double(double)> mgf_second;
    double mgf_sup = std::numeric_limits<double>::infinity();
    double variance = 0.0;
    std::string name = "custom";
};

/// Jump amplitude law: density, sampler, moment generating function and
/// its domain. Immutable after construction.
class JumpLaw {
public:
    static JumpLaw gaussian(double variance);
    static JumpLaw laplace(double rate);
    static JumpLaw product_laplace(std::vector<double> rates);
    static JumpLaw multivariate_gaussian(const Eigen::MatrixXd& covariance);
    static JumpLaw custom(CustomJumps law);

    int dimension() const;
    std::string kind_name() const;
    bool is_gaussian() const { return std::holds_alternative<GaussianJumps>(impl_); }
    bool is_laplace() const { return std::holds_alternative<LaplaceJumps>(impl_); }
    const auto& parameters() const { return impl_; }

    /// Supremum s of the MGF domain (+inf for Gaussian laws).
    double mgf_sup() const;
    /// Variance of a one-dimensional law.
    double variance() const;
    /// Trace of the covariance (sum of coordinate variances).
    double total_variance() const;

    double density(double z) const;
    double density(std::span<const double> z) const;

    /// E[e^{uY}] and its derivatives E[Y e^{uY}], E[Y^2 e^{uY}] for
    /// one-dimensional laws. Throws std::domain_error for |u| >= s.
    double mgf(double u) const;
    double mgf_prime(double u) const;
    double mgf_second(double u) const;

    /// One draw written into `out` (size dimension()).
    void sample(RandomStream& stream, std::span<double> out) const;
    /// `count` draws, row-major count x dimension().
    std::vector<double> sample(RandomStream& stream, std::size_t count) const;

    /// True when (N(0, v) * phi) has a closed form (Gaussian, Laplace).
    bool has_smoothed_closed_form() const;
    /// (N(0, smoothing_variance) * phi)(z), one-dimensional closed forms only.
    double smoothed_density(double smoothing_variance, double z) const;

    /// Upper bound on P(|Y_1 + ... + Y_n| > half_width): exact for Gaussian
    /// laws, two-sided Chernoff bound otherwise.
    double convolution_tail_bound(int n, double half_width) const;

private:
    using Impl = std::variant<GaussianJumps, LaplaceJumps, ProductLaplaceJumps,
                              MultivariateGaussianJumps, CustomJumps>;
    explicit JumpLaw(Impl impl) : impl_(std::move(impl)) {}
    void require_scalar(const char* what) const;

    Impl impl_;
};

struct ConvolutionOptions {
    /// Maximum tolerated probability mass outside the grid.
    double leak_tolerance = 1e-8;
    /// Maximum negative FFT mass that may be clipped silently.
    double clip_tolerance = 1e-9;
};

/// Sampled density of the n-fold self-convolution phi^{*n} on `grid`.
/// n = 0 is a unit mass in the centre cell; n = 1 returns the density
/// samples. For n >= 2 Gaussian and Laplace laws are sampled from their closed
/// forms; other laws use zero-padded FFT convolution by repeated squaring,
/// clipped and renormalised to unit trapezoid mass.
std::vector<double> convolution_power(const JumpLaw& law, int n,
                                      const UniformGrid& grid,
                                      const ConvolutionOptions& options = {});

/// Default grid for phi^{*n}: 2^14 + 1 points, half width
/// k * sqrt(n * Var + horizon).
UniformGrid default_convolution_grid(const JumpLaw& law, int n, double horizon,
                                     double k = 12.0,
                                     std::size_t points = (1u << 14) + 1);

}  // namespace jumpdiff
