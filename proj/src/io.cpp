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

#include "jumpdiff/io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jumpdiff::io {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "binary format assumes little endian");

constexpr char kMagic[8] = {'J', 'D', 'I', 'F', 'F', 'E', 'N', 'S'};
constexpr std::uint32_t kEnsembleVersion = 1;

template <class T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("ensemble file truncated");
    return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

double parse_double(const std::string& text) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("malformed number: " + text);
    return v;
}

json law_to_json(const JumpLaw& law) {
    json j;
    j["kind"] = law.kind_name();
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, GaussianJumps>) {
                j["variance"] = p.variance;
            } else if constexpr (std::is_same_v<P, LaplaceJumps>) {
                j["rate"] = p.rate;
            } else if constexpr (std::is_same_v<P, ProductLaplaceJumps>) {
                j["rates"] = p.rates;
            } else if constexpr (std::is_same_v<P, MultivariateGaussianJumps>) {
                json rows = json::array();
                for (Eigen::Index r = 0; r < p.covariance.rows(); ++r) {
                    json row = json::array();
                    for (Eigen::Index c = 0; c < p.covariance.cols(); ++c) row.push_back(p.covariance(r, c));
                    rows.push_back(row);
                }
                j["covariance"] = rows;
            } else {
                throw std::invalid_argument("custom jump laws cannot be serialized");
            }
        },
        law.parameters());
    return j;
}

JumpLaw law_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return JumpLaw::gaussian(j.at("variance").get<double>());
    if (kind == "laplace") return JumpLaw::laplace(j.at("rate").get<double>());
    if (kind == "product_laplace") return JumpLaw::product_laplace(j.at("rates").get<std::vector<double>>());
    if (kind == "multivariate_gaussian") {
        const auto rows = j.at("covariance").get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd cov(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows.size()) throw std::invalid_argument("covariance must be square");
            for (std::size_t c = 0; c < rows.size(); ++c) {
                cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
            }
        }
        return JumpLaw::multivariate_gaussian(cov);
    }
    throw std::invalid_argument("unknown jump law kind: " + kind);
}

json grid_to_json(const UniformGrid& grid) {
    return json{{"half_width", grid.half_width()}, {"points", grid.size()}};
}

UniformGrid grid_from_json(const json& j) {
    return UniformGrid(j.at("half_width").get<double>(), j.at("points").get<std::size_t>());
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// --- curves -------------------------------------------------------------------

void write_curve_csv(std::ostream& out, const DensityCurve& curve) {
    const bool with_ci = curve.method == CurveMethod::kde;
    out << "y,value,method,error_bound" << (with_ci ? ",ci_half_width" : "") << '\n';
    const std::string method = to_string(curve.method);
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        out << format_double(curve.y(i)) << ',' << format_double(curve.values[i]) << ',' << method
            << ',' << format_double(curve.error_bound.empty() ? 0.0 : curve.error_bound[i]);
        if (with_ci) out << ',' << format_double(curve.ci_half_width[i]);
        out << '\n';
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".json");
    return p;
}

void write_curve(const std::filesystem::path& csv_path, const DensityCurve& curve) {
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    write_text(csv_path, csv.str());
    json meta{{"t", curve.t},
              {"x", curve.x},
              {"jump_rate", curve.jump_rate},
              {"law", curve.law},
              {"method", to_string(curve.method)},
              {"grid", grid_to_json(curve.grid)},
              {"grid_leak", curve.grid_leak},
              {"resolution", curve.resolution}};
    if (curve.truncation) {
        meta["truncation"] = {{"max_terms", curve.truncation->max_terms},
                              {"weight_tail", curve.truncation->weight_tail},
                              {"tail_mass_bound", curve.truncation->tail_mass_bound}};
    } else {
        meta["truncation"] = nullptr;
    }
    write_text(sidecar_path(csv_path), meta.dump(2) + "\n");
}

DensityCurve read_curve(const std::filesystem::path& csv_path) {
    std::istringstream in(read_text(csv_path));
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty curve file " + csv_path.string());
    const auto header = split(line, ',');
    if (header.size() < 4 || header[0] != "y" || header[1] != "value" || header[2] != "method" ||
        header[3] != "error_bound") {
        throw std::runtime_error("unexpected curve header in " + csv_path.string());
    }
    const bool with_ci = header.size() > 4 && header[4] == "ci_half_width";
    DensityCurve curve;
    std::vector<double> ys;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != header.size()) throw std::runtime_error("ragged curve row: " + line);
        ys.push_back(parse_double(f[0]));
        curve.values.push_back(parse_double(f[1]));
        curve.method = curve_method_from_string(f[2]);
        curve.error_bound.push_back(parse_double(f[3]));
        if (with_ci) curve.ci_half_width.push_back(parse_double(f[4]));
    }
    if (ys.size() < 3 || ys.size() % 2 == 0) {
        throw std::runtime_error("curve must have an odd number (>= 3) of rows");
    }
    const auto meta_path = sidecar_path(csv_path);
    if (std::filesystem::exists(meta_path)) {
        const auto meta = json::parse(read_text(meta_path));
        curve.t = meta.at("t").get<double>();
        curve.x = meta.at("x").get<double>();
        curve.jump_rate = meta.value("jump_rate", 0.0);
        curve.law = meta.value("law", std::string{});
        curve.grid = grid_from_json(meta.at("grid"));
        curve.grid_leak = meta.value("grid_leak", 0.0);
        curve.resolution = meta.value("resolution", 0.0);
        if (meta.contains("truncation") && !meta["truncation"].is_null()) {
            const auto& tr = meta["truncation"];
            curve.truncation = SeriesTruncation{tr.at("max_terms").get<int>(),
                                                tr.at("weight_tail").get<double>(),
                                                tr.at("tail_mass_bound").get<double>()};
        }
        if (curve.grid.size() != ys.size()) {
            throw std::runtime_error("curve sidecar grid does not match the CSV rows");
        }
    } else {
        curve.x = 0.5 * (ys.front() + ys.back());
        curve.grid = UniformGrid(0.5 * (ys.back() - ys.front()), ys.size());
    }
    return curve;
}

// --- ensembles -------------------------------------------------------------------

void write_ensemble_csv(std::ostream& out, const PathEnsemble& ensemble) {
    out << "path,jumps";
    for (int k = 0; k < ensemble.dimension; ++k) out << ",x" << k;
    out << '\n';
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        out << i << ',' << ensemble.jump_counts[i];
        for (double v : ensemble.terminal(i)) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_ensemble_binary(const std::filesystem::path& path, const PathEnsemble& ensemble) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kEnsembleVersion);
    put<std::uint64_t>(out, ensemble.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(ensemble.dimension));
    put<double>(out, ensemble.t);
    put<std::uint64_t>(out, ensemble.provenance.seed);
    out.write(reinterpret_cast<const char*>(ensemble.terminal_values.data()),
              static_cast<std::streamsize>(ensemble.terminal_values.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(ensemble.jump_counts.data()),
              static_cast<std::streamsize>(ensemble.jump_counts.size() * sizeof(std::uint32_t)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

PathEnsemble read_ensemble_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) {
        throw std::runtime_error("not an ensemble file: " + path.string());
    }
    if (get<std::uint32_t>(in) != kEnsembleVersion) throw std::runtime_error("unsupported ensemble version");
    PathEnsemble ens;
    const auto n = get<std::uint64_t>(in);
    ens.dimension = static_cast<int>(get<std::uint32_t>(in));
    ens.t = get<double>(in);
    ens.provenance.seed = get<std::uint64_t>(in);
    ens.terminal_values.resize(n * static_cast<std::uint64_t>(ens.dimension));
    ens.jump_counts.resize(n);
    in.read(reinterpret_cast<char*>(ens.terminal_values.data()),
            static_cast<std::streamsize>(ens.terminal_values.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(ens.jump_counts.data()),
            static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
    if (!in) throw std::runtime_error("ensemble file truncated");
    return ens;
}

// --- envelopes ----------------------------------------------------------------------

std::string envelopes_to_json(const EnvelopeSet& set) {
    const auto& k = set.constants;
    json j{{"kind", to_string(set.kind)},
           {"dimension", set.dimension},
           {"horizon", set.horizon},
           {"calibration", to_string(set.calibration)},
           {"constants",
            {{"A_T", k.A_T}, {"a_T", k.a_T}, {"C_T", k.C_T}, {"c_T", k.c_T}, {"q", k.q}, {"C_q_T", k.C_qT}}}};
    if (set.validity) {
        const auto& v = *set.validity;
        j["validity"] = {{"grid", grid_to_json(v.grid)},
                         {"times", v.times},
                         {"x", v.x},
                         {"tolerance", v.tolerance}};
    } else {
        j["validity"] = nullptr;
    }
    if (set.tail_model) {
        const auto& tm = *set.tail_model;
        j["tail_model"] = {{"drift_bound", tm.drift_bound},
                           {"diffusion_bound", tm.diffusion_bound},
                           {"jump_rate", tm.jump_rate},
                           {"law", law_to_json(tm.law)}};
    } else {
        j["tail_model"] = nullptr;
    }
    return j.dump(2) + "\n";
}

EnvelopeSet envelopes_from_json(const std::string& text) {
    const auto j = json::parse(text);
    EnvelopeSet set;
    set.kind = envelope_kind_from_string(j.at("kind").get<std::string>());
    set.dimension = j.value("dimension", 1);
    set.horizon = j.at("horizon").get<double>();
    set.calibration = calibration_source_from_string(j.value("calibration", std::string{"user"}));
    const auto& c = j.at("constants");
    set.constants.A_T = c.value("A_T", 1.0);
    set.constants.a_T = c.value("a_T", 1.0);
    set.constants.C_T = c.at("C_T").get<double>();
    set.constants.c_T = c.at("c_T").get<double>();
    set.constants.q = c.value("q", 2.0);
    set.constants.C_qT = c.value("C_q_T", 1.0);
    if (j.contains("validity") && !j["validity"].is_null()) {
        const auto& v = j["validity"];
        set.validity = ValidityRegion{grid_from_json(v.at("grid")),
                                      v.at("times").get<std::vector<double>>(), v.value("x", 0.0),
                                      v.value("tolerance", 0.0)};
    }
    if (j.contains("tail_model") && !j["tail_model"].is_null()) {
        const auto& tm = j["tail_model"];
        set.tail_model = TailModel{tm.value("drift_bound", 0.0), tm.value("diffusion_bound", 1.0),
                                   tm.value("jump_rate", 0.0), law_from_json(tm.at("law"))};
    }
    set.validate();
    return set;
}

void write_envelopes(const std::filesystem::path& path, const EnvelopeSet& set) {
    write_text(path, envelopes_to_json(set));
}

EnvelopeSet read_envelopes(const std::filesystem::path& path) {
    return envelopes_from_json(read_text(path));
}

// --- reports ------------------------------------------------------------------------

void write_containment_csv(std::ostream& out, const ContainmentReport& report) {
    out << "t,r,lower,value,upper,margin,pass\n";
    for (const auto& row : report.rows) {
        out << format_double(row.t) << ',' << format_double(row.r) << ',' << format_double(row.lower)
            << ',' << format_double(row.value) << ',' << format_double(row.upper) << ','
            << format_double(row.margin) << ',' << (row.pass ? 1 : 0) << '\n';
    }
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows) {
    out << "r,tail_bound,density_envelope\n";
    for (const auto& row : rows) {
        out << format_double(row.r) << ',' << format_double(row.tail_bound) << ','
            << format_double(row.density_envelope) << '\n';
    }
}

}  // namespace jumpdiff::io
