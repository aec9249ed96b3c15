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

#include "jumpdiff/quadrature.hpp"

#include "jumpdiff/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace jumpdiff {

GaussLegendreRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussLegendreRule rule;
    if (n == 1) {
        rule.nodes = {0.0};
        rule.weights = {2.0};
        return rule;
    }
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            derivative = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

namespace {

const GaussLegendreRule& cached_rule(std::size_t order) {
    static std::mutex m;
    static std::map<std::size_t, GaussLegendreRule> cache;
    std::lock_guard lock(m);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
    return it->second;
}

struct Panel {
    const std::function<double(double)>& f;
    const GaussLegendreRule& rule;
    std::size_t evaluations = 0;

    double apply(double a, double b) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
        }
        evaluations += rule.nodes.size();
        return sum * half;
    }
};

struct Adaptive {
    Panel& panel;
    double tolerance_per_length;
    double abs_tol;
    int max_depth;
    double worst = 0.0;
    bool failed = false;

    double refine(double a, double b, double whole, int depth, double& error) {
        const double mid = 0.5 * (a + b);
        const double left = panel.apply(a, mid);
        const double right = panel.apply(mid, b);
        const double diff = std::abs(left + right - whole);
        const double allowed = std::max(tolerance_per_length * (b - a), abs_tol);
        if (diff <= allowed) {
            error += diff;
            return left + right;
        }
        if (depth >= max_depth) {
            failed = true;
            worst = std::max(worst, diff / std::max(allowed, 1e-300));
            error += diff;
            return left + right;
        }
        return refine(a, mid, left, depth + 1, error) +
               refine(mid, b, right, depth + 1, error);
    }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& options) {
    QuadratureResult result;
    if (a == b) return result;
    Panel panel{f, cached_rule(options.order)};
    const double whole = panel.apply(a, b);
    // Scale the relative tolerance by a first estimate of the magnitude.
    const double magnitude = std::max(std::abs(whole), options.abs_tol);
    Adaptive adaptive{panel, options.rel_tol * magnitude / std::abs(b - a),
                      options.abs_tol, options.max_depth};
    double error = 0.0;
    result.value = adaptive.refine(a, b, whole, 0, error);
    result.error_estimate = error;
    result.evaluations = panel.evaluations;
    if (adaptive.failed) {
        throw QuadratureError("integrate: depth limit reached before tolerance",
                              error / std::max(std::abs(result.value), 1e-300));
    }
    return result;
}

}  // namespace jumpdiff
