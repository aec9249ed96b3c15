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

#include "jumpdiff/tail_bounds.hpp"

#include "jumpdiff/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jumpdiff {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PsiFunction::PsiFunction(double diffusion_bound, double jump_rate, JumpLaw law)
    : c2_(diffusion_bound), lambda_(jump_rate), law_(std::move(law)) {
    if (!(c2_ > 0.0)) throw std::invalid_argument("PsiFunction: c2 must be positive");
    if (!(lambda_ >= 0.0)) throw std::invalid_argument("PsiFunction: lambda must be >= 0");
    if (law_.dimension() != 1) {
        throw std::invalid_argument("PsiFunction: tail bounds need a one-dimensional law");
    }
    sup_ = lambda_ == 0.0 ? kInf : law_.mgf_sup();
}

void PsiFunction::check_domain(double u) const {
    if (!(std::abs(u) < sup_)) throw std::domain_error("Psi: u outside the MGF domain");
}

double PsiFunction::value(double u) const {
    check_domain(u);
    const double jumps = lambda_ == 0.0 ? 0.0 : lambda_ * (law_.mgf(u) - 1.0);
    return 0.5 * u * u * c2_ * c2_ + jumps;
}

double PsiFunction::derivative(double u) const {
    check_domain(u);
    const double jumps = lambda_ == 0.0 ? 0.0 : lambda_ * law_.mgf_prime(u);
    return u * c2_ * c2_ + jumps;
}

double PsiFunction::second_derivative(double u) const {
    check_domain(u);
    const double jumps = lambda_ == 0.0 ? 0.0 : lambda_ * law_.mgf_second(u);
    return c2_ * c2_ + jumps;
}

double PsiFunction::curvature_at_zero() const { return second_derivative(0.0); }

ThetaSolver::ThetaSolver(PsiFunction psi, ThetaOptions options)
    : psi_(std::move(psi)), options_(options) {}

double ThetaSolver::operator()(double xi) const {
    if (!(xi > 0.0)) throw std::domain_error("theta: xi must be positive");
    const double c2sq = psi_.diffusion_bound() * psi_.diffusion_bound();
    const double s = psi_.domain_sup();
    double lo = 0.0;
    double hi = xi / c2sq;  // Psi'(u) >= u c2^2
    const bool clipped = std::isfinite(s) && s * (1.0 - 0x1.0p-40) < hi;
    if (clipped) hi = s * (1.0 - 0x1.0p-40);

    auto residual = [&](double u) {
        const double r = psi_.derivative(u) - xi;
        return std::isnan(r) ? kInf : r;
    };
    const double tolerance = options_.abs_tol * std::max(1.0, xi);
    const double at_hi = residual(hi);
    if (at_hi < 0.0) {
        if (clipped) throw std::domain_error("theta: xi beyond Psi'(s-)");
        // Unclipped bracket end is a root up to rounding.
        if (-at_hi <= tolerance) return hi;
    }

    double u = std::min(hi, xi / psi_.curvature_at_zero());
    double f = residual(u);
    double best_u = u;
    double best_f = std::abs(f);
    double previous_step = hi - lo;
    for (int iter = 0; iter < options_.max_iterations; ++iter) {
        if (std::abs(f) <= tolerance) return u;
        if (f > 0.0) {
            hi = u;
        } else {
            lo = u;
        }
        double next = std::numeric_limits<double>::quiet_NaN();
        const double slope = psi_.second_derivative(u);
        if (std::isfinite(f) && std::isfinite(slope) && slope > 0.0) next = u - f / slope;
        // Newton only while it lands inside the bracket and contracts faster than bisection.
        const bool newton = next > lo && next < hi && std::abs(next - u) < 0.5 * previous_step;
        if (!newton) {
            next = 0.5 * (lo + hi);
            if (next <= lo || next >= hi) break;  // bracket at machine resolution
        }
        previous_step = std::abs(next - u);
        u = next;
        f = residual(u);
        if (std::abs(f) < best_f) {
            best_f = std::abs(f);
            best_u = u;
        }
    }
    return best_u;
}

double ThetaSolver::integral(double z) const {
    if (!(z > 0.0)) throw std::domain_error("theta integral: z must be positive");
    QuadratureOptions options;
    options.rel_tol = 1e-9;
    const auto result = integrate([this](double xi) { return xi > 0.0 ? (*this)(xi) : 0.0; },
                                  0.0, z, options);
    return result.value;
}

double tail_bound(const ThetaSolver& solver, double drift_bound, double t, double r) {
    if (!(t > 0.0)) throw std::invalid_argument("tail_bound: t must be positive");
    if (!(r >= 0.0)) throw std::invalid_argument("tail_bound: r must be >= 0");
    const double z = r / t - drift_bound;
    if (z <= 0.0) return 1.0;
    return std::min(1.0, 2.0 * std::exp(-t * solver.integral(z)));
}

double tail_bound(const PsiFunction& psi, double drift_bound, double t, double r) {
    return tail_bound(ThetaSolver(psi), drift_bound, t, r);
}

double density_upper_envelope(const ThetaSolver& solver, double drift_bound, double t, double r,
                              const UpperEnvelopeConstants& constants, int dimension) {
    if (!(constants.q > 1.0) || !(constants.C_qT > 0.0)) {
        throw std::invalid_argument("density_upper_envelope: need q > 1 and C_qT > 0");
    }
    if (!(t > 0.0) || dimension < 1) {
        throw std::invalid_argument("density_upper_envelope: need t > 0, d >= 1");
    }
    const double scale = std::pow(t, 0.5 * dimension);
    return constants.C_qT / scale *
           std::pow(tail_bound(solver, drift_bound, t, r), 1.0 / constants.q);
}

}  // namespace jumpdiff
