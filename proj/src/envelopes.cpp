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

#include "jumpdiff/envelopes.hpp"

#include "jumpdiff/error.hpp"
#include "jumpdiff/tail_bounds.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace jumpdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double shape_exponent(EnvelopeKind kind, double t, double r) {
    if (kind == EnvelopeKind::gaussian_jump) return r * std::sqrt(ln_plus(r / t));
    return r;
}

void check_time(const EnvelopeSet& set, double t, double r) {
    if (!(t > 0.0) || t > set.horizon) {
        std::ostringstream msg;
        msg << "envelope: t = " << t << " outside (0, " << set.horizon << "]";
        throw std::invalid_argument(msg.str());
    }
    if (!(r >= 0.0)) throw std::invalid_argument("envelope: r must be >= 0");
}

// log of the smallest C making both sides hold for a fixed decay coefficient c.
struct CalibrationPoint {
    double t;
    double r;
    double exponent;     // E(t, r)
    double log_upper;    // log(sqrt t * (value + error))
    double log_value;    // log(value)
};

struct CalibrationObjective {
    std::span<const CalibrationPoint> points;

    double log_upper_constant(double c) const {
        double worst = -kInf;
        for (const auto& p : points) worst = std::max(worst, p.log_upper + p.exponent / c);
        return worst;
    }
    double log_lower_constant(double c) const {
        double worst = -kInf;
        for (const auto& p : points) {
            const double indicator = p.r == 0.0 ? 1.0 / std::sqrt(p.t) : 0.0;
            worst = std::max(worst, std::log(std::exp(-c * p.exponent) + indicator) - p.log_value);
        }
        return worst;
    }
    double operator()(double c) const {
        return std::max(log_upper_constant(c), log_lower_constant(c));
    }
};

}  // namespace

std::string to_string(EnvelopeKind kind) {
    return kind == EnvelopeKind::gaussian_jump ? "gaussian_jump" : "laplace_jump";
}

EnvelopeKind envelope_kind_from_string(const std::string& name) {
    if (name == "gaussian_jump") return EnvelopeKind::gaussian_jump;
    if (name == "laplace_jump") return EnvelopeKind::laplace_jump;
    throw std::invalid_argument("unknown envelope kind: " + name);
}

std::string to_string(CalibrationSource source) {
    return source == CalibrationSource::fitted ? "fitted" : "user";
}

CalibrationSource calibration_source_from_string(const std::string& name) {
    if (name == "fitted") return CalibrationSource::fitted;
    if (name == "user") return CalibrationSource::user;
    throw std::invalid_argument("unknown calibration source: " + name);
}

void EnvelopeSet::validate() const {
    const auto& k = constants;
    if (!(k.C_T > 1.0) || !(k.c_T > 1.0)) {
        throw std::invalid_argument("EnvelopeSet: C_T and c_T must exceed 1");
    }
    if (!(k.A_T >= 1.0) || !(k.a_T >= 1.0)) {
        throw std::invalid_argument("EnvelopeSet: A_T and a_T must be >= 1");
    }
    if (!(k.q > 1.0) || !(k.C_qT > 0.0)) {
        throw std::invalid_argument("EnvelopeSet: need q > 1 and C_qT > 0");
    }
    if (!(horizon > 0.0)) throw std::invalid_argument("EnvelopeSet: horizon must be positive");
    if (dimension < 1) throw std::invalid_argument("EnvelopeSet: dimension must be >= 1");
}

double ln_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

double gaussian_envelope(double C, double c, double t, double r, Side side) {
    const double e = r * std::sqrt(ln_plus(r / t));
    if (side == Side::lower) {
        return (std::exp(-c * e) + (r == 0.0 ? 1.0 / std::sqrt(t) : 0.0)) / C;
    }
    return C / std::sqrt(t) * std::exp(-e / c);
}

double laplace_envelope(double C, double c, double t, double r, Side side) {
    if (side == Side::lower) {
        return (std::exp(-c * r) + (r == 0.0 ? 1.0 / std::sqrt(t) : 0.0)) / C;
    }
    return C / std::sqrt(t) * std::exp(-r / c);
}

double gaussian_envelope(const EnvelopeSet& set, double t, double r, Side side) {
    check_time(set, t, r);
    return gaussian_envelope(set.constants.C_T, set.constants.c_T, t, r, side);
}

double laplace_envelope(const EnvelopeSet& set, double t, double r, Side side) {
    check_time(set, t, r);
    return laplace_envelope(set.constants.C_T, set.constants.c_T, t, r, side);
}

double envelope(const EnvelopeSet& set, double t, double r, Side side) {
    return set.kind == EnvelopeKind::gaussian_jump ? gaussian_envelope(set, t, r, side)
                                                   : laplace_envelope(set, t, r, side);
}

// --- lower-bound series ---------------------------------------------------

double gaussian_lower_series(double A_T, double a_T, double beta, double jump_rate, double t,
                             double r, int max_terms) {
    const double C = 1.0 / (A_T * std::sqrt(a_T));
    const auto weights = poisson_weights(jump_rate * t, max_terms);
    std::vector<double> terms(weights.size());
    double power = C;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const double v = t / a_T + static_cast<double>(n) * beta;
        terms[n] = power * weights[n] * std::exp(-r * r / (2.0 * v)) /
                   std::sqrt(2.0 * std::numbers::pi * v);
        power *= C;
    }
    return pairwise_sum(terms);
}

double gaussian_lower_series_multid(double A_T, double a_T, const Eigen::MatrixXd& covariance,
                                    double jump_rate, double t, double r, int max_terms,
                                    double horizon) {
    const auto d = covariance.rows();
    if (d == 0 || covariance.cols() != d) {
        throw std::invalid_argument("gaussian_lower_series_multid: square covariance required");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
    if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0) ||
        !covariance.isApprox(covariance.transpose())) {
        throw std::invalid_argument("gaussian_lower_series_multid: covariance must be SPD");
    }
    const double dd = static_cast<double>(d);
    const double inv_norm = 1.0 / eig.eigenvalues().minCoeff();
    const double det =
        (covariance + (horizon / a_T) * Eigen::MatrixXd::Identity(d, d)).determinant();
    const double C = 1.0 / (A_T * std::pow(a_T, 0.5 * dd));
    const auto weights = poisson_weights(jump_rate * t, max_terms);
    std::vector<double> terms;
    double power = C;
    for (std::size_t n = 1; n < weights.size(); ++n) {
        power *= C;
        const double nn = static_cast<double>(n);
        terms.push_back(power * weights[n] * std::exp(-r * r * inv_norm / (2.0 * nn)) /
                        (std::pow(2.0 * std::numbers::pi * nn, 0.5 * dd) * std::sqrt(det)));
    }
    if (r == 0.0) {
        terms.push_back(std::exp(-jump_rate * t) /
                        (A_T * std::pow(2.0 * std::numbers::pi * t, 0.5 * dd)));
    }
    return pairwise_sum(terms);
}

double LaplaceLowerBound::operator()(double r) const {
    return (r == 0.0 ? heat_term : 0.0) + prefactor * std::exp(-decay_rate * r);
}

LaplaceLowerBound laplace_lower_bound(double A_T, double a_T, std::span<const double> rates,
                                      double jump_rate, double t, double horizon) {
    if (rates.empty()) throw std::invalid_argument("laplace_lower_bound: no rates");
    if (!(t > 0.0) || t > horizon) throw std::invalid_argument("laplace_lower_bound: t outside (0, T]");
    const double d = static_cast<double>(rates.size());
    // q_s >= kappa e^{-nu s} prod_i e^{-2 mu_i |w_i|}, kappa = prod_i mu_i / (4 sqrt(2a)) / A.
    double kappa = 1.0 / A_T;
    double nu = 0.0;
    double double_rate_product = 1.0;
    double norm_sq = 0.0;
    double jensen = 0.0;
    for (double mu : rates) {
        if (!(mu > 0.0)) throw std::invalid_argument("laplace_lower_bound: rates must be positive");
        kappa *= mu / (4.0 * std::sqrt(2.0 * a_T));
        nu += mu * mu / (2.0 * a_T);
        double_rate_product *= 2.0 * mu;
        norm_sq += mu * mu;
        jensen += 2.0 * mu * std::sqrt(2.0 * horizon / (std::numbers::pi * a_T));
    }
    const double reduced = kappa / double_rate_product;
    const double heat = std::exp(-jensen) / (A_T * std::pow(a_T, 0.5 * d));
    LaplaceLowerBound out;
    out.heat_term =
        std::exp(-jump_rate * horizon) / (A_T * std::pow(2.0 * std::numbers::pi * t, 0.5 * d));
    out.prefactor = std::exp(-jump_rate * t) * double_rate_product * heat *
                    std::exp(-nu * horizon) * std::expm1(reduced * jump_rate * t);
    out.decay_rate = 4.0 * std::sqrt(norm_sq);
    return out;
}

// --- calibration ------------------------------------------------------------

EnvelopeSet calibrate(EnvelopeKind kind, std::span<const DensityCurve> references, double horizon,
                      const CalibrationOptions& options) {
    if (references.empty()) throw std::invalid_argument("calibrate: no reference curves");
    if (!(options.safety >= 1.0)) throw std::invalid_argument("calibrate: safety must be >= 1");
    if (!(options.c_min >= 1.0) || !(options.c_max > options.c_min) || options.scan_points < 3) {
        throw std::invalid_argument("calibrate: invalid c_T search range");
    }
    const auto& grid = references.front().grid;
    const double x = references.front().x;
    std::vector<CalibrationPoint> points;
    std::vector<double> times;
    double tolerance = 0.0;
    for (const auto& curve : references) {
        if (!(curve.grid == grid) || curve.x != x) {
            throw GridMismatch("calibrate: reference curves must share grid and origin");
        }
        if (!(curve.t > 0.0) || curve.t > horizon) {
            throw GridMismatch("calibrate: reference time outside (0, T]");
        }
        times.push_back(curve.t);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double r = std::abs(grid[i]);
            const double value = curve.values[i];
            const double err = curve.error_bound.empty() ? 0.0 : curve.error_bound[i];
            tolerance = std::max(tolerance, err);
            if (!(value > 0.0)) {
                throw CalibrationInfeasible("calibrate: reference density is not positive", curve.t,
                                            r);
            }
            points.push_back({curve.t, r, shape_exponent(kind, curve.t, r),
                              std::log(std::sqrt(curve.t) * (value + err)), std::log(value)});
        }
    }

    const CalibrationObjective objective{points};
    const double lo = std::log(options.c_min);
    const double hi = std::log(options.c_max);
    const std::size_t n = options.scan_points;
    std::size_t best = 0;
    double best_value = kInf;
    std::vector<double> scan(n);
    for (std::size_t i = 0; i < n; ++i) {
        scan[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double v = objective(std::exp(scan[i]));
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    double a = scan[best == 0 ? 0 : best - 1];
    double b = scan[std::min(best + 1, n - 1)];
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double u = b - golden * (b - a);
    double w = a + golden * (b - a);
    double fu = objective(std::exp(u));
    double fw = objective(std::exp(w));
    for (int iter = 0; iter < 100 && b - a > 1e-10; ++iter) {
        if (fu < fw) {
            b = w;
            w = u;
            fw = fu;
            u = b - golden * (b - a);
            fu = objective(std::exp(u));
        } else {
            a = u;
            u = w;
            fu = fw;
            w = a + golden * (b - a);
            fw = objective(std::exp(w));
        }
    }
    double c = std::exp(scan[best]);
    double log_C = best_value;
    for (const auto& [arg, val] : {std::pair{u, fu}, std::pair{w, fw}}) {
        if (val < log_C) {
            log_C = val;
            c = std::exp(arg);
        }
    }
    if (!std::isfinite(log_C)) {
        throw CalibrationInfeasible("calibrate: no finite constants", times.front(), 0.0);
    }

    EnvelopeSet set;
    set.kind = kind;
    set.dimension = 1;
    set.horizon = horizon;
    set.calibration = CalibrationSource::fitted;
    set.constants.A_T = options.A_T;
    set.constants.a_T = options.a_T;
    set.constants.q = options.q;
    set.constants.C_T = options.safety * std::max(1.0, std::exp(log_C));
    set.constants.c_T = options.safety * c;
    set.validity = ValidityRegion{grid, times, x, tolerance};
    set.tail_model = options.tail_model;

    if (options.tail_model) {
        const auto& tm = *options.tail_model;
        const ThetaSolver solver(PsiFunction(tm.diffusion_bound, tm.jump_rate, tm.law));
        double worst = 0.0;
        for (const auto& curve : references) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double r = std::abs(grid[i]);
                const double err = curve.error_bound.empty() ? 0.0 : curve.error_bound[i];
                const double tail = tail_bound(solver, tm.drift_bound, curve.t, r);
                worst = std::max(worst, std::sqrt(curve.t) * (curve.values[i] + err) /
                                            std::pow(tail, 1.0 / options.q));
            }
        }
        set.constants.C_qT = options.safety * worst;
    }

    // Scaling both constants up only loosens the envelopes; confirm anyway.
    for (const auto& p : points) {
        const double value = std::exp(p.log_value);
        const double upper_value = std::exp(p.log_upper) / std::sqrt(p.t);
        if (envelope(set, p.t, p.r, Side::lower) > value ||
            envelope(set, p.t, p.r, Side::upper) < upper_value) {
            throw CalibrationInfeasible("calibrate: containment fails after fitting", p.t, p.r);
        }
    }
    set.validate();
    return set;
}

EnvelopeSet calibrate_linear(const JumpLaw& law, double jump_rate, std::span<const double> times,
                             const UniformGrid& grid, double horizon,
                             const CalibrationOptions& options, double tol) {
    EnvelopeKind kind;
    if (law.is_gaussian()) {
        kind = EnvelopeKind::gaussian_jump;
    } else if (law.is_laplace()) {
        kind = EnvelopeKind::laplace_jump;
    } else {
        throw std::invalid_argument("calibrate_linear: Gaussian or Laplace law required");
    }
    std::vector<DensityCurve> curves;
    for (double t : times) curves.push_back(linear_density(law, jump_rate, t, 0.0, grid, tol));
    CalibrationOptions opts = options;
    if (!opts.tail_model) opts.tail_model = TailModel{0.0, 1.0, jump_rate, law};
    return calibrate(kind, curves, horizon, opts);
}

ContainmentReport check_containment(const EnvelopeSet& set, const DensityCurve& curve,
                                    const ContainmentOptions& options) {
    if (!(curve.t > 0.0) || curve.t > set.horizon) {
        throw GridMismatch("check_containment: curve time outside the envelope horizon");
    }
    if (curve.values.size() != curve.grid.size()) {
        throw GridMismatch("check_containment: curve values do not match its grid");
    }
    if (set.validity) {
        const auto& v = *set.validity;
        const double eps = 1e-9 * std::max(1.0, v.grid.half_width());
        if (curve.x != v.x || curve.grid.half_width() > v.grid.half_width() + eps) {
            throw GridMismatch("check_containment: curve leaves the validity grid");
        }
    }
    const bool statistical = curve.method == CurveMethod::kde;
    ContainmentReport report;
    report.worst_margin = kInf;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        ContainmentRow row;
        row.t = curve.t;
        row.r = std::abs(curve.grid[i]);
        row.value = curve.values[i];
        double slack = 0.0;
        if (statistical) {
            const double ci = curve.ci_half_width.empty() ? 0.0 : curve.ci_half_width[i];
            slack = options.ci_multiplier * ci + curve.resolution;
        } else if (!curve.error_bound.empty()) {
            slack = curve.error_bound[i];
        }
        row.lower = envelope(set, row.t, row.r, Side::lower);
        row.upper = envelope(set, row.t, row.r, Side::upper);
        row.margin = std::min(row.value + slack - row.lower, row.upper - row.value + slack);
        row.pass = row.margin >= 0.0;
        if (!row.pass) {
            ++report.violations;
            if (!report.first_violation) report.first_violation = row;
        }
        report.worst_margin = std::min(report.worst_margin, row.margin);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace jumpdiff
