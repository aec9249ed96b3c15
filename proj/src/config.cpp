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

#include "jumpdiff/config.hpp"

#include "jumpdiff/io.hpp"

#include <yaml-cpp/yaml.h>

#include <set>

namespace jumpdiff {

namespace {

template <class T>
T scalar(const YAML::Node& node, const std::string& key, T fallback) {
    const auto child = node[key];
    if (!child) return fallback;
    try {
        return child.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("config: invalid value for '" + key + "'");
    }
}

template <class T>
T required(const YAML::Node& node, const std::string& key, const std::string& where) {
    const auto child = node[key];
    if (!child) throw ConfigError("config: missing '" + key + "' in " + where);
    try {
        return child.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("config: invalid value for '" + key + "' in " + where);
    }
}

void reject_unknown(const YAML::Node& node, const std::set<std::string>& allowed,
                    const std::string& where) {
    if (!node.IsMap()) throw ConfigError("config: '" + where + "' must be a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.contains(key)) throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
}

ScalarFamily parse_family(const YAML::Node& node) {
    if (node.IsScalar()) return ConstantFamily{node.as<double>()};
    const auto name = required<std::string>(node, "family", "coefficient");
    if (name == "constant") {
        reject_unknown(node, {"family", "value"}, "constant family");
        return ConstantFamily{required<double>(node, "value", "constant family")};
    }
    if (name == "affine_clamped") {
        reject_unknown(node, {"family", "intercept", "slope", "lower", "upper"}, "affine_clamped family");
        return AffineClampedFamily{scalar(node, "intercept", 0.0), scalar(node, "slope", 0.0),
                                   required<double>(node, "lower", "affine_clamped family"),
                                   required<double>(node, "upper", "affine_clamped family")};
    }
    if (name == "trigonometric") {
        reject_unknown(node, {"family", "base", "amplitude", "frequency", "phase", "cosine"},
                       "trigonometric family");
        return TrigonometricFamily{scalar(node, "base", 0.0), scalar(node, "amplitude", 0.0),
                                   scalar(node, "frequency", 1.0), scalar(node, "phase", 0.0),
                                   scalar(node, "cosine", false)};
    }
    throw ConfigError("config: unknown coefficient family '" + name + "'");
}

std::vector<ScalarFamily> parse_families(const YAML::Node& node, int dimension, const std::string& what) {
    if (!node.IsSequence() || static_cast<int>(node.size()) != dimension) {
        throw ConfigError("config: '" + what + "' needs one entry per dimension");
    }
    std::vector<ScalarFamily> out;
    for (const auto& item : node) out.push_back(parse_family(item));
    return out;
}

JumpLaw parse_law(const YAML::Node& node) {
    if (!node) throw ConfigError("config: missing 'jump_law' section");
    const auto kind = required<std::string>(node, "kind", "jump_law");
    if (kind == "gaussian") {
        reject_unknown(node, {"kind", "variance"}, "jump_law");
        return JumpLaw::gaussian(required<double>(node, "variance", "jump_law"));
    }
    if (kind == "laplace") {
        reject_unknown(node, {"kind", "rate"}, "jump_law");
        return JumpLaw::laplace(required<double>(node, "rate", "jump_law"));
    }
    if (kind == "product_laplace") {
        reject_unknown(node, {"kind", "rates"}, "jump_law");
        return JumpLaw::product_laplace(required<std::vector<double>>(node, "rates", "jump_law"));
    }
    if (kind == "multivariate_gaussian") {
        reject_unknown(node, {"kind", "covariance"}, "jump_law");
        const auto rows = required<std::vector<std::vector<double>>>(node, "covariance", "jump_law");
        const auto d = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd cov(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != d) {
                throw ConfigError("config: covariance must be square");
            }
            for (Eigen::Index c = 0; c < d; ++c) {
                cov(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            }
        }
        return JumpLaw::multivariate_gaussian(cov);
    }
    throw ConfigError("config: unknown jump law kind '" + kind + "'");
}

ModelSpec parse_model(const YAML::Node& node, JumpLaw law) {
    if (!node) throw ConfigError("config: missing 'model' section");
    reject_unknown(node, {"dimension", "jump_rate", "horizon", "drift", "diffusion", "drift_bound",
                          "diffusion_bound", "ellipticity"},
                   "model");
    const int d = scalar(node, "dimension", 1);
    if (d < 1 || d > kMaxDimension) throw ConfigError("config: dimension must be in [1, 3]");
    const double rate = required<double>(node, "jump_rate", "model");
    const double horizon = scalar(node, "horizon", 1.0);

    DriftField drift = DriftField::zero(d);
    if (const auto n = node["drift"]; n && !(n.IsScalar() && n.as<std::string>() == "zero")) {
        drift = DriftField::componentwise(parse_families(n, d, "drift"));
    }
    DiffusionField diffusion = DiffusionField::identity(d);
    if (const auto n = node["diffusion"]; n && !(n.IsScalar() && n.as<std::string>() == "identity")) {
        reject_unknown(n, {"constant", "diagonal"}, "diffusion");
        if (n["constant"]) {
            const auto rows = n["constant"].as<std::vector<std::vector<double>>>();
            std::vector<double> flat;
            for (const auto& row : rows) {
                if (static_cast<int>(row.size()) != d) throw ConfigError("config: diffusion matrix must be d x d");
                flat.insert(flat.end(), row.begin(), row.end());
            }
            if (static_cast<int>(rows.size()) != d) throw ConfigError("config: diffusion matrix must be d x d");
            diffusion = DiffusionField::constant(flat, d);
        } else if (n["diagonal"]) {
            diffusion = DiffusionField::diagonal(parse_families(n["diagonal"], d, "diffusion.diagonal"));
        } else {
            throw ConfigError("config: diffusion needs 'constant' or 'diagonal'");
        }
    }
    auto optional_key = [&](const char* key) -> std::optional<double> {
        if (!node[key]) return std::nullopt;
        return scalar(node, key, 0.0);
    };
    return ModelSpec::create(std::move(drift), std::move(diffusion), rate, std::move(law), horizon,
                             optional_key("drift_bound"), optional_key("diffusion_bound"),
                             optional_key("ellipticity"));
}

RunDefaults parse_defaults(const YAML::Node& node) {
    RunDefaults d;
    if (!node) return d;
    reject_unknown(node, {"x", "t", "seed", "paths", "steps_per_unit_time", "tol", "grid", "bandwidth",
                          "times", "safety", "A_T", "a_T", "q", "C_q_T", "rmax", "bound_points"},
                   "defaults");
    d.x = scalar(node, "x", d.x);
    d.t = scalar(node, "t", d.t);
    if (node["seed"]) d.seed = scalar<std::uint64_t>(node, "seed", 0);
    d.paths = scalar(node, "paths", d.paths);
    d.steps_per_unit_time = scalar(node, "steps_per_unit_time", d.steps_per_unit_time);
    d.tol = scalar(node, "tol", d.tol);
    if (const auto g = node["grid"]) {
        reject_unknown(g, {"half_width", "step"}, "defaults.grid");
        d.grid_half_width = scalar(g, "half_width", d.grid_half_width);
        d.grid_step = scalar(g, "step", d.grid_step);
    }
    if (node["bandwidth"]) d.bandwidth = scalar(node, "bandwidth", 0.0);
    d.times = scalar(node, "times", d.times);
    d.safety = scalar(node, "safety", d.safety);
    d.A_T = scalar(node, "A_T", d.A_T);
    d.a_T = scalar(node, "a_T", d.a_T);
    d.q = scalar(node, "q", d.q);
    d.C_qT = scalar(node, "C_q_T", d.C_qT);
    d.rmax = scalar(node, "rmax", d.rmax);
    d.bound_points = scalar(node, "bound_points", d.bound_points);
    return d;
}

}  // namespace

Config parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
    reject_unknown(root, {"model", "jump_law", "defaults"}, "top level");
    Config cfg;
    try {
        cfg.model = parse_model(root["model"], parse_law(root["jump_law"]));
    } catch (const ConfigError&) {
        throw;
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.defaults = parse_defaults(root["defaults"]);
    cfg.source_text = text;
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_text(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    Config cfg = parse_config(text);
    cfg.path = path;
    return cfg;
}

}  // namespace jumpdiff
