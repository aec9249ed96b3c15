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

namespace jumpdiff {

/// Psi(u) = u^2 c2^2 / 2 + lambda (E[e^{uY}] - 1) on the MGF domain of a
/// one-dimensional jump law.
class PsiFunction {
public:
    PsiFunction(double diffusion_bound, double jump_rate, JumpLaw law);

    double diffusion_bound() const { return c2_; }
    double jump_rate() const { return lambda_; }
    const JumpLaw& law() const { return law_; }
    /// s = sup of the MGF domain (+inf when lambda = 0).
    double domain_sup() const { return sup_; }

    double value(double u) const;
    double derivative(double u) const;
    double second_derivative(double u) const;
    /// Psi'(0) = c2^2 + lambda Var(Y).
    double curvature_at_zero() const;

private:
    void check_domain(double u) const;

    double c2_;
    double lambda_;
    JumpLaw law_;
    double sup_;
};

struct ThetaOptions {
    double abs_tol = 1e-12;  // residual tolerance, scaled by max(1, xi)
    int max_iterations = 500;
};

/// Inverse of xi = Psi'(u) on (0, s): safeguarded Newton inside a bisection
/// bracket (0, min(xi / c2^2, s (1 - 2^-40))).
class ThetaSolver {
public:
    explicit ThetaSolver(PsiFunction psi, ThetaOptions options = {});

    const PsiFunction& psi() const { return psi_; }
    double operator()(double xi) const;
    /// Integral of theta over (0, z) by adaptive Gauss-Legendre (rel tol 1e-9).
    double integral(double z) const;

private:
    PsiFunction psi_;
    ThetaOptions options_;
};

/// min(1, 2 exp(-t * integral_0^{r/t - c1} theta)), or 1 when r/t <= c1.
double tail_bound(const ThetaSolver& solver, double drift_bound, double t, double r);
double tail_bound(const PsiFunction& psi, double drift_bound, double t, double r);

struct UpperEnvelopeConstants {
    double C_qT = 1.0;
    double q = 2.0;
};

/// (C_qT / t^{d/2}) * tail_bound^{1/q}. Rigorous (up to the constant) for
/// d = 1 only; larger d is a plotting extrapolation.
double density_upper_envelope(const ThetaSolver& solver, double drift_bound, double t, double r,
                              const UpperEnvelopeConstants& constants, int dimension = 1);

}  // namespace jumpdiff
