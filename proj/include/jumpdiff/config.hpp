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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jumpdiff {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `defaults` section; every field can be overridden on the command line.
struct RunDefaults {
    double x = 0.0;
    double t = 1.0;
    std::optional<std::uint64_t> seed;
    std::size_t paths = 100000;
    double steps_per_unit_time = 256.0;
    double tol = 1e-12;
    double grid_half_width = 8.0;
    double grid_step = 0.05;
    std::optional<double> bandwidth;
    std::vector<double> times{0.1, 0.5, 1.0};
    double safety = 1.1;
    double A_T = 1.0;
    double a_T = 1.0;
    double q = 2.0;
    double C_qT = 1.0;
    double rmax = 10.0;
    std::size_t bound_points = 101;
};

struct Config {
    ModelSpec model;
    RunDefaults defaults;
    std::string source_text;
    std::filesystem::path path;
};

/// Sections: model, jump_law, defaults. Throws ConfigError.
Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

}  // namespace jumpdiff
