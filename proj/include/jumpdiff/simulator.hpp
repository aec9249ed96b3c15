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

#include "jumpdiff/model.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace jumpdiff {

inline constexpr double kDefaultStepsPerUnitTime = 256.0;

/// ceil(256 t), at least one step.
std::size_t default_step_count(double t);

struct SimConfig {
    std::size_t step_count = 256;  // uniform Euler steps on [0, t]
    std::size_t path_count = 1;
    std::uint64_t seed = 0;
    bool record_paths = false;
    unsigned threads = 0;  // 0: default_thread_count()
};

struct SeedProvenance {
    std::uint64_t seed = 0;
    std::string scheme;  // how per-path streams derive from the seed
};

/// Event times and states of one path (uniform nodes merged with jumps).
struct PathRecord {
    std::vector<double> times;
    std::vector<double> states;  // times.size() x d, row-major
};

struct PathEnsemble {
    int dimension = 1;
    double t = 0.0;
    std::vector<double> origin;
    std::vector<double> terminal_values;  // N x d, row-major
    std::vector<std::uint32_t> jump_counts;
    std::size_t step_count = 0;
    SeedProvenance provenance;
    std::vector<PathRecord> paths;  // filled only when record_paths

    std::size_t size() const { return jump_counts.size(); }
    std::span<const double> terminal(std::size_t i) const {
        const auto d = static_cast<std::size_t>(dimension);
        return std::span<const double>(terminal_values).subspan(i * d, d);
    }
};

/// Euler scheme on a uniform grid with the Poisson jump times inserted
/// exactly: between events X <- X + b(X) h + sigma(X) sqrt(h) Z, and at each
/// jump time an independent amplitude is added. Path i draws only from
/// streams keyed by (seed, i), so the ensemble does not depend on the
/// number of worker threads.
PathEnsemble simulate_terminal(const ModelSpec& spec, std::span<const double> x, double t,
                               const SimConfig& config);

struct TailEstimate {
    double radius = 0.0;
    double estimate = 0.0;       // fraction of paths with |X_t - x| > r
    double ci_half_width = 0.0;  // 95% normal-approximation half width
};

/// Empirical P(|X_t - x| > r) for each radius.
std::vector<TailEstimate> empirical_tail(const PathEnsemble& ensemble,
                                         std::span<const double> x,
                                         std::span<const double> radii);

}  // namespace jumpdiff
