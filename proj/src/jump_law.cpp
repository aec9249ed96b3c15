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

#include "jumpdiff/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jumpdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// exp(log_prefactor) * erfc(a), stable when the prefactor overflows and
// erfc underflows.
double scaled_erfc(double log_prefactor, double a) {
    if (a < 25.0) {
        const double tail = std::erfc(a);
        return std::exp(log_prefactor + std::log(tail));
    }
    // Asymptotic expansion of erfcx(a) = exp(a^2) erfc(a).
    const double inv2 = 1.0 / (a * a);
    const double series =
        1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2;
    const double erfcx = series / (a * std::sqrt(std::numbers::pi));
    return std::exp(log_prefactor - a * a) * erfcx;
}

double gaussian_pdf(double variance, double z) {
    return std::exp(-0.5 * z * z / variance) /
           std::sqrt(2.0 * std::numbers::pi * variance);
}

// Convex in u; golden-section search on [0, hi].
double chernoff_log_bound(const std::function<double(double)>& log_mgf, int n,
                          double w, double hi) {
    auto objective = [&](double u) { return -u * w + n * log_mgf(u); };
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int iter = 0; iter < 200; ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = objective(d);
        }
    }
    return std::min({0.0, fc, fd});
}

}  // namespace

JumpLaw JumpLaw::gaussian(double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw std::invalid_argument("gaussian jump law: variance must be positive");
    }
    return JumpLaw(GaussianJumps{variance});
}

JumpLaw JumpLaw::laplace(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("laplace jump law: rate must be positive");
    }
    return JumpLaw(LaplaceJumps{rate});
}

JumpLaw JumpLaw::product_laplace(std::vector<double> rates) {
    if (rates.empty()) throw std::invalid_argument("product laplace: no rates");
    for (double r : rates) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("product laplace: rates must be positive");
        }
    }
    return JumpLaw(ProductLaplaceJumps{std::move(rates)});
}

JumpLaw JumpLaw::multivariate_gaussian(const Eigen::MatrixXd& covariance) {
    if (covariance.rows() == 0 || covariance.rows() != covariance.cols()) {
        throw std::invalid_argument("multivariate gaussian: covariance must be square");
    }
    if (!covariance.isApprox(covariance.transpose(), 1e-12)) {
        throw std::invalid_argument("multivariate gaussian: covariance not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(covariance);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("multivariate gaussian: covariance not positive definite");
    }
    return JumpLaw(MultivariateGaussianJumps{covariance, llt.matrixL()});
}

JumpLaw JumpLaw::custom(CustomJumps law) {
    if (!law.density || !law.sampler || !law.mgf || !law.mgf_prime || !law.mgf_second) {
        throw std::invalid_argument(
            "custom jump law: density, sampler and MGF with two derivatives are required");
    }
    if (!(law.mgf_sup > 0.0)) {
        throw std::invalid_argument("custom jump law: MGF domain supremum must be positive");
    }
    if (!(law.variance > 0.0)) {
        throw std::invalid_argument("custom jump law: variance must be positive");
    }
    return JumpLaw(std::move(law));
}

int JumpLaw::dimension() const {
    return std::visit(
        Overloaded{
            [](const ProductLaplaceJumps& p) { return static_cast<int>(p.rates.size()); },
            [](const MultivariateGaussianJumps& p) {
                return static_cast<int>(p.covariance.rows());
            },
            [](const auto&) { return 1; },
        },
        impl_);
}

std::string JumpLaw::kind_name() const {
    return std::visit(Overloaded{
                          [](const GaussianJumps&) { return std::string("gaussian"); },
                          [](const LaplaceJumps&) { return std::string("laplace"); },
                          [](const ProductLaplaceJumps&) {
                              return std::string("product_laplace");
                          },
                          [](const MultivariateGaussianJumps&) {
                              return std::string("multivariate_gaussian");
                          },
                          [](const CustomJumps& c) { return c.name; },
                      },
                      impl_);
}

void JumpLaw::require_scalar(const char* what) const {
    if (dimension() != 1 || std::holds_alternative<ProductLaplaceJumps>(impl_) ||
        std::holds_alternative<MultivariateGaussianJumps>(impl_)) {
        throw std::invalid_argument(std::string(what) +
                                    ": only defined for one-dimensional laws");
    }
}

double JumpLaw::mgf_sup() const {
    return std::visit(Overloaded{
                          [](const GaussianJumps&) { return kInf; },
                          [](const LaplaceJumps& l) { return l.rate; },
                          [](const ProductLaplaceJumps& p) {
                              return *std::min_element(p.rates.begin(), p.rates.end());
                          },
                          [](const MultivariateGaussianJumps&) { return kInf; },
                          [](const CustomJumps& c) { return c.mgf_sup; },
                      },
                      impl_);
}

double JumpLaw::variance() const {
    require_scalar("variance");
    return std::visit(Overloaded{
                          [](const GaussianJumps& g) { return g.variance; },
                          [](const LaplaceJumps& l) { return 2.0 / (l.rate * l.rate); },
                          [](const CustomJumps& c) { return c.variance; },
                          [](const auto&) { return 0.0; },
                      },
                      impl_);
}

double JumpLaw::total_variance() const {
    return std::visit(Overloaded{
                          [](const GaussianJumps& g) { return g.variance; },
                          [](const LaplaceJumps& l) { return 2.0 / (l.rate * l.rate); },
                          [](const ProductLaplaceJumps& p) {
                              double sum = 0.0;
                              for (double r : p.rates) sum += 2.0 / (r * r);
                              return sum;
                          },
                          [](const MultivariateGaussianJumps& m) {
                              return m.covariance.trace();
                          },
                          [](const CustomJumps& c) { return c.variance; },
                      },
                      impl_);
}

double JumpLaw::density(double z) const {
    require_scalar("density");
    return std::visit(
        Overloaded{
            [z](const GaussianJumps& g) { return gaussian_pdf(g.variance, z); },
            [z](const LaplaceJumps& l) { return 0.5 * l.rate * std::exp(-l.rate * std::abs(z)); },
            [z](const CustomJumps& c) { return c.density(z); },
            [](const auto&) { return 0.0; },
        },
        impl_);
}

double JumpLaw::density(std::span<const double> z) const {
    if (static_cast<int>(z.size()) != dimension()) {
        throw std::invalid_argument("density: point dimension mismatch");
    }
    return std::visit(
        Overloaded{
            [z](const ProductLaplaceJumps& p) {
                double value = 1.0;
                for (std::size_t i = 0; i < p.rates.size(); ++i) {
                    value *= 0.5 * p.rates[i] * std::exp(-p.rates[i] * std::abs(z[i]));
                }
                return value;
            },
            [z](const MultivariateGaussianJumps& m) {
                const Eigen::Map<const Eigen::VectorXd> point(z.data(),
                                                              static_cast<Eigen::Index>(z.size()));
                const Eigen::VectorXd w = m.cholesky.triangularView<Eigen::Lower>().solve(point);
                const double log_det = 2.0 * m.cholesky.diagonal().array().log().sum();
                const double d = static_cast<double>(z.size());
                return std::exp(-0.5 * w.squaredNorm() - 0.5 * log_det -
                                0.5 * d * std::log(2.0 * std::numbers::pi));
            },
            [this, z](const auto&) { return density(z[0]); },
        },
        impl_);
}

double JumpLaw::mgf(double u) const {
    require_scalar("mgf");
    return std::visit(
        Overloaded{
            [u](const GaussianJumps& g) { return std::exp(0.5 * u * u * g.variance); },
            [u](const LaplaceJumps& l) {
                const double mu = l.rate;
                if (!(std::abs(u) < mu)) throw std::domain_error("mgf: |u| outside (-mu, mu)");
                return 0.5 * mu * (1.0 / (mu - u) + 1.0 / (mu + u));
            },
            [u](const CustomJumps& c) {
                if (!(std::abs(u) < c.mgf_sup)) throw std::domain_error("mgf: |u| >= s");
                return c.mgf(u);
            },
            [](const auto&) { return 0.0; },
        },
        impl_);
}

double JumpLaw::mgf_prime(double u) const {
    require_scalar("mgf_prime");
    return std::visit(
        Overloaded{
            [u](const GaussianJumps& g) {
                return u * g.variance * std::exp(0.5 * u * u * g.variance);
            },
            [u](const LaplaceJumps& l) {
                const double mu = l.rate;
                if (!(std::abs(u) < mu)) throw std::domain_error("mgf: |u| outside (-mu, mu)");
                const double left = mu - u;
                const double right = mu + u;
                return 0.5 * mu * (1.0 / (left * left) - 1.0 / (right * right));
            },
            [u](const CustomJumps& c) {
                if (!(std::abs(u) < c.mgf_sup)) throw std::domain_error("mgf: |u| >= s");
                return c.mgf_prime(u);
            },
            [](const auto&) { return 0.0; },
        },
        impl_);
}

double JumpLaw::mgf_second(double u) const {
    require_scalar("mgf_second");
    return std::visit(
        Overloaded{
            [u](const GaussianJumps& g) {
                const double b = g.variance;
                return (b + u * u * b * b) * std::exp(0.5 * u * u * b);
            },
            [u](const LaplaceJumps& l) {
                const double mu = l.rate;
                if (!(std::abs(u) < mu)) throw std::domain_error("mgf: |u| outside (-mu, mu)");
                const double left = mu - u;
                const double right = mu + u;
                return mu * (1.0 / (left * left * left) + 1.0 / (right * right * right));
            },
            [u](const CustomJumps& c) {
                if (!(std::abs(u) < c.mgf_sup)) throw std::domain_error("mgf: |u| >= s");
                return c.mgf_second(u);
            },
            [](const auto&) { return 0.0; },
        },
        impl_);
}

void JumpLaw::sample(RandomStream& stream, std::span<double> out) const {
    std::visit(
        Overloaded{
            [&](const GaussianJumps& g) { out[0] = std::sqrt(g.variance) * stream.normal(); },
            [&](const LaplaceJumps& l) {
                const double u = stream.uniform();
                out[0] = u < 0.5 ? std::log(2.0 * u) / l.rate
                                 : -std::log(2.0 * (1.0 - u)) / l.rate;
            },
            [&](const ProductLaplaceJumps& p) {
                for (std::size_t i = 0; i < p.rates.size(); ++i) {
                    const double u = stream.uniform();
                    out[i] = u < 0.5 ? std::log(2.0 * u) / p.rates[i]
                                     : -std::log(2.0 * (1.0 - u)) / p.rates[i];
                }
            },
            [&](const MultivariateGaussianJumps& m) {
                const auto d = m.covariance.rows();
                double z[3];
                for (Eigen::Index i = 0; i < d; ++i) z[i] = stream.normal();
                for (Eigen::Index i = 0; i < d; ++i) {
                    double acc = 0.0;
                    for (Eigen::Index j = 0; j <= i; ++j) acc += m.cholesky(i, j) * z[j];
                    out[static_cast<std::size_t>(i)] = acc;
                }
            },
            [&](const CustomJumps& c) { out[0] = c.sampler(stream); },
        },
        impl_);
}

std::vector<double> JumpLaw::sample(RandomStream& stream, std::size_t count) const {
    const auto d = static_cast<std::size_t>(dimension());
    std::vector<double> out(count * d);
    for (std::size_t i = 0; i < count; ++i) {
        sample(stream, std::span<double>(out).subspan(i * d, d));
    }
    return out;
}

bool JumpLaw::has_smoothed_closed_form() const {
    return std::holds_alternative<GaussianJumps>(impl_) ||
           std::holds_alternative<LaplaceJumps>(impl_);
}

double JumpLaw::smoothed_density(double v, double z) const {
    if (!(v > 0.0)) throw std::invalid_argument("smoothed_density: variance must be positive");
    if (const auto* g = std::get_if<GaussianJumps>(&impl_)) {
        return gaussian_pdf(v + g->variance, z);
    }
    if (const auto* l = std::get_if<LaplaceJumps>(&impl_)) {
        // (mu/4) e^{mu^2 v/2} [e^{-mu z} erfc((mu v - z)/sqrt(2v))
        //                      + e^{mu z} erfc((mu v + z)/sqrt(2v))]
        const double mu = l->rate;
        const double root = std::sqrt(2.0 * v);
        const double base = 0.5 * mu * mu * v;
        return 0.25 * mu *
               (scaled_erfc(base - mu * z, (mu * v - z) / root) +
                scaled_erfc(base + mu * z, (mu * v + z) / root));
    }
    throw std::invalid_argument("smoothed_density: no closed form for " + kind_name());
}

double JumpLaw::convolution_tail_bound(int n, double half_width) const {
    require_scalar("convolution_tail_bound");
    if (n <= 0) return 0.0;
    if (const auto* g = std::get_if<GaussianJumps>(&impl_)) {
        return std::erfc(half_width / std::sqrt(2.0 * n * g->variance));
    }
    const double s = mgf_sup();
    double hi = std::isfinite(s) ? s * (1.0 - 1e-9) : 1.0;
    if (!std::isfinite(s)) {
        // Expand until the objective slope -W + n M'/M turns positive.
        while (n * mgf_prime(hi) / mgf(hi) < half_width && hi < 1e6) hi *= 2.0;
    }
    const auto right = [this](double u) { return std::log(mgf(u)); };
    const auto left = [this](double u) { return std::log(mgf(-u)); };
    return std::min(1.0, std::exp(chernoff_log_bound(right, n, half_width, hi)) +
                             std::exp(chernoff_log_bound(left, n, half_width, hi)));
}

}  // namespace jumpdiff
