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

#include "jumpdiff/simulator.hpp"

#include "jumpdiff/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace jumpdiff {

unsigned default_thread_count() {
    if (const char* env = std::getenv("JUMPDIFF_THREADS")) {
        const long value = std::strtol(env, nullptr, 10);
        if (value > 0) return static_cast<unsigned>(value);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

std::size_t default_step_count(double t) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(kDefaultStepsPerUnitTime * t)));
}

namespace {

struct Stepper {
    const ModelSpec& spec;
    std::size_t d;
    bool zero_drift;
    bool constant_diffusion;
    std::array<double, kMaxDimension * kMaxDimension> fixed_sigma{};

    explicit Stepper(const ModelSpec& s)
        : spec(s),
          d(static_cast<std::size_t>(s.dimension)),
          zero_drift(s.drift.is_zero()),
          constant_diffusion(s.diffusion.is_constant()) {
        if (constant_diffusion) {
            std::array<double, kMaxDimension> origin{};
            spec.diffusion(std::span<const double>(origin.data(), d),
                           std::span<double>(fixed_sigma.data(), d * d));
        }
    }

    void advance(std::span<double> state, double h, RandomStream& noise) const {
        std::array<double, kMaxDimension> drift{};
        std::array<double, kMaxDimension * kMaxDimension> sigma_buffer{};
        std::array<double, kMaxDimension> z{};
        if (!zero_drift) spec.drift(state, std::span<double>(drift.data(), d));
        const double* sigma = fixed_sigma.data();
        if (!constant_diffusion) {
            spec.diffusion(state, std::span<double>(sigma_buffer.data(), d * d));
            sigma = sigma_buffer.data();
        }
        const double root = std::sqrt(h);
        for (std::size_t j = 0; j < d; ++j) z[j] = noise.normal();
        for (std::size_t i = 0; i < d; ++i) {
            double diffusive = 0.0;
            for (std::size_t j = 0; j < d; ++j) diffusive += sigma[i * d + j] * z[j];
            state[i] += drift[i] * h + diffusive * root;
        }
    }
};

}  // namespace

PathEnsemble simulate_terminal(const ModelSpec& spec, std::span<const double> x, double t,
                               const SimConfig& config) {
    check_parameters(spec);
    if (!(t > 0.0) || t > spec.horizon) {
        throw std::invalid_argument("simulate_terminal: t must lie in (0, horizon]");
    }
    if (config.step_count < 1 || config.path_count < 1) {
        throw std::invalid_argument("simulate_terminal: need at least one step and one path");
    }
    const auto d = static_cast<std::size_t>(spec.dimension);
    if (x.size() != d) throw std::invalid_argument("simulate_terminal: origin dimension mismatch");

    PathEnsemble ensemble;
    ensemble.dimension = spec.dimension;
    ensemble.t = t;
    ensemble.origin.assign(x.begin(), x.end());
    ensemble.step_count = config.step_count;
    ensemble.terminal_values.resize(config.path_count * d);
    ensemble.jump_counts.resize(config.path_count);
    ensemble.provenance = {config.seed,
                           "philox4x32-10 key=seed counter=(block, purpose, path_index)"};
    if (config.record_paths) ensemble.paths.resize(config.path_count);

    const Stepper stepper(spec);
    const double lambda = spec.jump_rate;
    const std::size_t steps = config.step_count;
    const double dt = t / static_cast<double>(steps);

    parallel_for(config.path_count, config.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> jump_times;
        std::array<double, kMaxDimension> jump{};
        for (std::size_t path = begin; path < end; ++path) {
            RandomStream noise(config.seed, path, StreamPurpose::diffusion);
            RandomStream arrivals(config.seed, path, StreamPurpose::jump_times);
            RandomStream sizes(config.seed, path, StreamPurpose::jump_sizes);

            jump_times.clear();
            if (lambda > 0.0) {
                double tau = arrivals.exponential(lambda);
                while (tau <= t) {
                    jump_times.push_back(tau);
                    tau += arrivals.exponential(lambda);
                }
            }

            std::span<double> state(ensemble.terminal_values.data() + path * d, d);
            std::copy(x.begin(), x.end(), state.begin());
            PathRecord* record = config.record_paths ? &ensemble.paths[path] : nullptr;
            auto remember = [&](double time) {
                if (record == nullptr) return;
                record->times.push_back(time);
                record->states.insert(record->states.end(), state.begin(), state.end());
            };
            remember(0.0);

            double now = 0.0;
            std::size_t next_jump = 0;
            for (std::size_t k = 0; k < steps; ++k) {
                const double node = k + 1 == steps ? t : static_cast<double>(k + 1) * dt;
                while (next_jump < jump_times.size() && jump_times[next_jump] <= node) {
                    const double tau = jump_times[next_jump++];
                    if (tau > now) {
                        stepper.advance(state, tau - now, noise);
                        now = tau;
                    }
                    spec.jump_law.sample(sizes, std::span<double>(jump.data(), d));
                    for (std::size_t i = 0; i < d; ++i) state[i] += jump[i];
                    remember(now);
                }
                if (node > now) {
                    stepper.advance(state, node - now, noise);
                    now = node;
                }
                remember(now);
            }
            ensemble.jump_counts[path] = static_cast<std::uint32_t>(jump_times.size());
        }
    });
    return ensemble;
}

std::vector<TailEstimate> empirical_tail(const PathEnsemble& ensemble,
                                         std::span<const double> x,
                                         std::span<const double> radii) {
    const std::size_t n = ensemble.size();
    if (n == 0) throw std::invalid_argument("empirical_tail: empty ensemble");
    const auto d = static_cast<std::size_t>(ensemble.dimension);
    if (x.size() != d) throw std::invalid_argument("empirical_tail: origin dimension mismatch");
    std::vector<double> distance(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto point = ensemble.terminal(i);
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) sq += (point[j] - x[j]) * (point[j] - x[j]);
        distance[i] = std::sqrt(sq);
    }
    std::sort(distance.begin(), distance.end());
    std::vector<TailEstimate> out;
    out.reserve(radii.size());
    const double count = static_cast<double>(n);
    for (double r : radii) {
        if (!(r >= 0.0)) throw std::invalid_argument("empirical_tail: radii must be >= 0");
        const auto above = static_cast<double>(
            distance.end() - std::upper_bound(distance.begin(), distance.end(), r));
        const double p = above / count;
        out.push_back({r, p, 1.959963984540054 * std::sqrt(p * (1.0 - p) / count)});
    }
    return out;
}

}  // namespace jumpdiff
