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

// Reference computations that share no code with the library.
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// Neumaier-compensated accumulator in long double.
class CompensatedSum {
public:
    void add(long double v) {
        const long double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            c_ += (sum_ - t) + v;
        } else {
            c_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    long double value() const { return sum_ + c_; }

private:
    long double sum_ = 0.0L;
    long double c_ = 0.0L;
};

/// e^{-lambda t} sum_{n < terms} (lambda t)^n / n! N(0, t + n beta)(z).
inline long double gaussian_jump_series(long double beta, long double lambda, long double t,
                                        long double z, int terms = 30) {
    CompensatedSum sum;
    const long double pi = std::numbers::pi_v<long double>;
    long double weight = std::exp(-lambda * t);
    for (int n = 0; n < terms; ++n) {
        if (n > 0) weight *= lambda * t / n;
        const long double v = t + n * beta;
        sum.add(weight * std::exp(-z * z / (2.0L * v)) / std::sqrt(2.0L * pi * v));
    }
    return sum.value();
}

/// Density of B_t + compound Poisson(lambda, jumps) at z by Fourier inversion:
/// (1/pi) int_0^inf cos(w z) exp(-t w^2 / 2 + lambda t (cf(w) - 1)) dw.
inline double fourier_density(const std::function<double(double)>& jump_cf, double lambda,
                              double t, double z) {
    const double cutoff = std::sqrt(2.0 * 45.0 / t);
    auto integrand = [&](double w) {
        return std::cos(w * z) * std::exp(-0.5 * t * w * w + lambda * t * (jump_cf(w) - 1.0));
    };
    // Split the range so each piece holds a bounded number of oscillations.
    const int pieces = 8 + static_cast<int>(std::ceil(cutoff * std::abs(z) / 3.0));
    double total = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double a = cutoff * k / pieces;
        const double b = cutoff * (k + 1) / pieces;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 12, 1e-14);
    }
    return total / std::numbers::pi;
}

inline double laplace_cf(double mu, double w) { return mu * mu / (mu * mu + w * w); }
inline double gaussian_cf(double beta, double w) { return std::exp(-0.5 * beta * w * w); }

/// Trapezoid rule for (phi * phi)(z), phi = Laplace(mu), on [-L, L] with `nodes` nodes.
inline double laplace_pair_trapezoid(double mu, double z, long nodes = 100000, double L = 40.0) {
    const double h = 2.0 * L / static_cast<double>(nodes - 1);
    auto phi = [mu](double u) { return 0.5 * mu * std::exp(-mu * std::abs(u)); };
    CompensatedSum sum;
    for (long i = 0; i < nodes; ++i) {
        const double u = -L + h * static_cast<double>(i);
        const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
        sum.add(static_cast<long double>(w * phi(u) * phi(z - u)));
    }
    return static_cast<double>(sum.value()) * h;
}

/// (1/4)(1 + |z|) e^{-|z|}: density of the sum of two unit-rate Laplace draws.
inline double laplace_pair_closed_form(double z) {
    return 0.25 * (1.0 + std::abs(z)) * std::exp(-std::abs(z));
}

/// P(Poisson(m) > n) through the regularized incomplete gamma function.
inline double poisson_upper_tail(double m, int n) {
    return boost::math::gamma_p(static_cast<double>(n + 1), m);
}

/// int_0^z theta = z theta(z) - Psi(theta(z)) (Legendre duality, Psi(0) = 0).
inline double theta_integral_legendre(double z, double theta_z, double psi_at_theta) {
    return z * theta_z - psi_at_theta;
}

/// Psi for Gaussian / Laplace jumps written out independently.
inline double psi_gaussian(double c2, double lambda, double beta, double u) {
    return 0.5 * u * u * c2 * c2 + lambda * (std::exp(0.5 * beta * u * u) - 1.0);
}
inline double psi_laplace(double c2, double lambda, double mu, double u) {
    return 0.5 * u * u * c2 * c2 + lambda * (mu * mu / (mu * mu - u * u) - 1.0);
}

}  // namespace oracle
