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

#include "jumpdiff/cli.hpp"

#include "jumpdiff/config.hpp"
#include "jumpdiff/density_series.hpp"
#include "jumpdiff/envelopes.hpp"
#include "jumpdiff/error.hpp"
#include "jumpdiff/estimator.hpp"
#include "jumpdiff/io.hpp"
#include "jumpdiff/parallel.hpp"
#include "jumpdiff/simulator.hpp"
#include "jumpdiff/tail_bounds.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace jumpdiff {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    unsigned threads = 0;
};

struct SimulateArgs {
    std::optional<double> t;
    std::vector<double> x;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
    std::optional<std::uint64_t> seed;
    std::string format = "binary";
};

struct DensityArgs {
    std::optional<double> t;
    std::optional<double> x;
    std::optional<double> half_width;
    std::optional<double> step;
    std::optional<double> tol;
    std::string method = "closed";
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
    std::optional<std::uint64_t> seed;
    std::optional<double> bandwidth;
};

struct BoundsArgs {
    std::optional<double> t;
    std::optional<double> rmax;
    std::optional<std::size_t> points;
    std::optional<double> q;
    std::optional<double> C_qT;
};

struct CalibrateArgs {
    std::vector<double> times;
    std::optional<double> half_width;
    std::optional<double> step;
    std::optional<double> safety;
    std::optional<double> tol;
};

struct CheckArgs {
    std::string envelopes;
    std::string curve;
};

template <class T>
T pick(const std::optional<T>& flag, const T& fallback) {
    return flag ? *flag : fallback;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const Config& cfg) {
    if (flag) return *flag;
    if (cfg.defaults.seed) return *cfg.defaults.seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Collects outputs and writes manifest.json last.
class Run {
public:
    Run(std::string subcommand, const Common& common, const Config& cfg)
        : subcommand_(std::move(subcommand)), common_(common), cfg_(cfg),
          start_(std::chrono::steady_clock::now()), started_utc_(utc_timestamp()) {
        fs::create_directories(common.out_dir);
    }

    fs::path path(const std::string& name) const { return fs::path(common_.out_dir) / name; }
    void output(const std::string& name) { outputs_.push_back(name); }
    Json& parameters() { return parameters_; }
    void seed(std::uint64_t s) { seed_ = s; }

    void finish() {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        Json m;
        m["tool"] = "jumpdiff";
        m["version"] = kVersion;
        m["subcommand"] = subcommand_;
        m["config_path"] = common_.config_path;
        m["config_snapshot"] = cfg_.source_text;
        m["parameters"] = parameters_;
        m["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
        m["threads"] = common_.threads == 0 ? default_thread_count() : common_.threads;
        m["output_directory"] = common_.out_dir;
        m["outputs"] = outputs_;
        m["started_utc"] = started_utc_;
        m["wall_clock_seconds"] = wall;
        io::write_text(path("manifest.json"), m.dump(2) + "\n");
    }

private:
    std::string subcommand_;
    Common common_;
    const Config& cfg_;
    std::chrono::steady_clock::time_point start_;
    std::string started_utc_;
    Json parameters_ = Json::object();
    std::optional<std::uint64_t> seed_;
    std::vector<std::string> outputs_;
};

std::vector<double> resolve_origin(const std::vector<double>& flag, const Config& cfg) {
    const auto d = static_cast<std::size_t>(cfg.model.dimension);
    if (flag.empty()) return std::vector<double>(d, cfg.defaults.x);
    if (flag.size() == 1) return std::vector<double>(d, flag[0]);
    if (flag.size() != d) throw ConfigError("--x needs 1 or d values");
    return flag;
}

std::size_t resolve_steps(const std::optional<std::size_t>& flag, const Config& cfg, double t) {
    if (flag) return *flag;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.defaults.steps_per_unit_time * t)));
}

void require_positive_time(double t, const Config& cfg) {
    if (!(t > 0.0) || t > cfg.model.horizon) throw ConfigError("t must lie in (0, horizon]");
}

void cmd_simulate(const Common& common, const SimulateArgs& a, const Config& cfg) {
    Run run("simulate", common, cfg);
    const double t = pick(a.t, cfg.defaults.t);
    require_positive_time(t, cfg);
    const auto x = resolve_origin(a.x, cfg);
    SimConfig sim;
    sim.path_count = pick(a.paths, cfg.defaults.paths);
    sim.step_count = resolve_steps(a.steps, cfg, t);
    sim.seed = resolve_seed(a.seed, cfg);
    sim.threads = common.threads;
    run.seed(sim.seed);
    if (a.format != "binary" && a.format != "csv" && a.format != "both") {
        throw ConfigError("--format must be binary, csv or both");
    }
    const auto ens = simulate_terminal(cfg.model, x, t, sim);
    if (a.format != "csv") {
        io::write_ensemble_binary(run.path("ensemble.bin"), ens);
        run.output("ensemble.bin");
    }
    if (a.format != "binary") {
        std::ostringstream csv;
        io::write_ensemble_csv(csv, ens);
        io::write_text(run.path("ensemble.csv"), csv.str());
        run.output("ensemble.csv");
    }
    run.parameters() = {{"t", t}, {"x", x}, {"paths", sim.path_count}, {"steps", sim.step_count},
                        {"format", a.format}, {"seed_scheme", ens.provenance.scheme}};
    run.finish();
}

void cmd_density(const Common& common, const DensityArgs& a, const Config& cfg) {
    Run run("density", common, cfg);
    const double t = pick(a.t, cfg.defaults.t);
    require_positive_time(t, cfg);
    const double x = pick(a.x, cfg.defaults.x);
    const double tol = pick(a.tol, cfg.defaults.tol);
    const auto grid = UniformGrid::with_step(pick(a.half_width, cfg.defaults.grid_half_width),
                                             pick(a.step, cfg.defaults.grid_step));
    const auto& model = cfg.model;
    if (model.dimension != 1) throw ConfigError("density: one-dimensional model required");
    Json params{{"t", t}, {"x", x}, {"method", a.method}, {"tol", tol},
                {"grid", {{"half_width", grid.half_width()}, {"points", grid.size()}, {"step", grid.step()}}}};
    DensityCurve curve;
    if (a.method == "closed" || a.method == "fft") {
        if (!model.is_linear()) throw ConfigError("density: series methods need b = 0, sigma = 1");
        if (a.method == "closed" && !model.jump_law.is_gaussian()) {
            throw ConfigError("density: --method closed needs Gaussian jumps");
        }
        if (a.method == "fft" && model.jump_law.is_gaussian()) {
            throw ConfigError("density: Gaussian jumps have a closed form, use --method closed");
        }
        SeriesOptions options;
        options.threads = common.threads;
        curve = linear_density(model.jump_law, model.jump_rate, t, x, grid, tol, options);
    } else if (a.method == "kde") {
        SimConfig sim;
        sim.path_count = pick(a.paths, cfg.defaults.paths);
        sim.step_count = resolve_steps(a.steps, cfg, t);
        sim.seed = resolve_seed(a.seed, cfg);
        sim.threads = common.threads;
        run.seed(sim.seed);
        const std::vector<double> origin{x};
        const auto ens = simulate_terminal(model, origin, t, sim);
        KdeConfig kc;
        kc.bandwidth = a.bandwidth ? a.bandwidth : cfg.defaults.bandwidth;
        kc.grid = grid;
        kc.threads = common.threads;
        curve = kde(ens, kc);
        curve.jump_rate = model.jump_rate;
        curve.law = model.jump_law.kind_name();
        params["paths"] = sim.path_count;
        params["steps"] = sim.step_count;
        params["bandwidth"] = kc.bandwidth ? Json(*kc.bandwidth) : Json("silverman");
    } else {
        throw ConfigError("--method must be closed, fft or kde");
    }
    io::write_curve(run.path("curve.csv"), curve);
    run.output("curve.csv");
    run.output("curve.json");
    run.parameters() = params;
    run.finish();
}

void cmd_bounds(const Common& common, const BoundsArgs& a, const Config& cfg) {
    Run run("bounds", common, cfg);
    const double t = pick(a.t, cfg.defaults.t);
    require_positive_time(t, cfg);
    const double rmax = pick(a.rmax, cfg.defaults.rmax);
    const std::size_t points = pick(a.points, cfg.defaults.bound_points);
    if (!(rmax > 0.0) || points < 2) throw ConfigError("bounds: need rmax > 0 and points >= 2");
    const UpperEnvelopeConstants constants{pick(a.C_qT, cfg.defaults.C_qT), pick(a.q, cfg.defaults.q)};
    const auto& m = cfg.model;
    const ThetaSolver solver(PsiFunction(m.diffusion_bound, m.jump_rate, m.jump_law));
    std::vector<io::BoundsRow> rows;
    for (std::size_t i = 0; i < points; ++i) {
        const double r = rmax * static_cast<double>(i) / static_cast<double>(points - 1);
        rows.push_back({r, tail_bound(solver, m.drift_bound, t, r),
                        density_upper_envelope(solver, m.drift_bound, t, r, constants, m.dimension)});
    }
    std::ostringstream csv;
    io::write_bounds_csv(csv, rows);
    io::write_text(run.path("bounds.csv"), csv.str());
    run.output("bounds.csv");
    run.parameters() = {{"t", t}, {"rmax", rmax}, {"points", points}, {"q", constants.q},
                        {"C_q_T", constants.C_qT}, {"c1", m.drift_bound}, {"c2", m.diffusion_bound}};
    run.finish();
}

void cmd_calibrate(const Common& common, const CalibrateArgs& a, const Config& cfg) {
    Run run("calibrate", common, cfg);
    const auto& m = cfg.model;
    if (m.dimension != 1 || !m.is_linear()) {
        throw ConfigError("calibrate: one-dimensional model with b = 0, sigma = 1 required");
    }
    const auto times = a.times.empty() ? cfg.defaults.times : a.times;
    for (double t : times) require_positive_time(t, cfg);
    const auto grid = UniformGrid::with_step(pick(a.half_width, cfg.defaults.grid_half_width),
                                             pick(a.step, cfg.defaults.grid_step));
    CalibrationOptions options;
    options.safety = pick(a.safety, cfg.defaults.safety);
    options.A_T = cfg.defaults.A_T;
    options.a_T = cfg.defaults.a_T;
    options.q = cfg.defaults.q;
    const double tol = pick(a.tol, cfg.defaults.tol);
    const auto set = calibrate_linear(m.jump_law, m.jump_rate, times, grid, m.horizon, options, tol);
    io::write_envelopes(run.path("envelopes.json"), set);
    run.output("envelopes.json");
    run.parameters() = {{"times", times},
                        {"grid", {{"half_width", grid.half_width()}, {"points", grid.size()}, {"step", grid.step()}}},
                        {"safety", options.safety},
                        {"tol", tol}};
    run.finish();
}

int cmd_check(const Common& common, const CheckArgs& a, const Config& cfg, std::ostream& out,
              std::ostream& err) {
    Run run("check", common, cfg);
    EnvelopeSet set;
    DensityCurve curve;
    try {
        set = io::read_envelopes(a.envelopes);
        curve = io::read_curve(a.curve);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const auto report = check_containment(set, curve);
    std::ostringstream csv;
    io::write_containment_csv(csv, report);
    io::write_text(run.path("containment.csv"), csv.str());
    run.output("containment.csv");
    run.parameters() = {{"envelopes", a.envelopes},
                        {"curve", a.curve},
                        {"violations", report.violations},
                        {"worst_margin", report.worst_margin}};
    run.finish();
    if (!report.passed()) {
        const auto& v = *report.first_violation;
        err << "containment violated: " << report.violations << " point(s); first at t = "
            << io::format_double(v.t) << ", r = " << io::format_double(v.r) << '\n';
        return kExitViolation;
    }
    out << "containment passed at " << report.rows.size() << " points\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transition densities and bounds for jump diffusions", "jumpdiff"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", common.config_path, "YAML model config")->required();
        sub->add_option("--out", common.out_dir, "Output directory");
        sub->add_option("--threads", common.threads, "Worker threads (0: JUMPDIFF_THREADS or all cores)");
    };

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Simulate terminal values X_t");
    add_common(s);
    s->add_option("--t", sim.t);
    s->add_option("--x", sim.x)->expected(1, kMaxDimension);
    s->add_option("--paths", sim.paths);
    s->add_option("--steps", sim.steps);
    s->add_option("--seed", sim.seed);
    s->add_option("--format", sim.format, "binary, csv or both");

    DensityArgs den;
    auto* d = app.add_subcommand("density", "Transition density curve");
    add_common(d);
    d->add_option("--t", den.t);
    d->add_option("--x", den.x);
    d->add_option("--half-width", den.half_width);
    d->add_option("--step", den.step);
    d->add_option("--tol", den.tol);
    d->add_option("--method", den.method, "closed, fft or kde");
    d->add_option("--paths", den.paths);
    d->add_option("--steps", den.steps);
    d->add_option("--seed", den.seed);
    d->add_option("--bandwidth", den.bandwidth);

    BoundsArgs bnd;
    auto* b = app.add_subcommand("bounds", "Tail bound and density envelope");
    add_common(b);
    b->add_option("--t", bnd.t);
    b->add_option("--rmax", bnd.rmax);
    b->add_option("--points", bnd.points);
    b->add_option("--q", bnd.q);
    b->add_option("--C-q", bnd.C_qT);

    CalibrateArgs cal;
    auto* c = app.add_subcommand("calibrate", "Fit envelope constants");
    add_common(c);
    c->add_option("--times", cal.times)->expected(1, 1000);
    c->add_option("--half-width", cal.half_width);
    c->add_option("--step", cal.step);
    c->add_option("--safety", cal.safety);
    c->add_option("--tol", cal.tol);

    CheckArgs chk;
    auto* k = app.add_subcommand("check", "Check a curve against envelopes");
    add_common(k);
    k->add_option("--envelopes", chk.envelopes)->required();
    k->add_option("--curve", chk.curve)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        const Config cfg = load_config(common.config_path);
        if (s->parsed()) cmd_simulate(common, sim, cfg);
        if (d->parsed()) cmd_density(common, den, cfg);
        if (b->parsed()) cmd_bounds(common, bnd, cfg);
        if (c->parsed()) cmd_calibrate(common, cal, cfg);
        if (k->parsed()) return cmd_check(common, chk, cfg, out, err);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const GridTooNarrow& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const RingingError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const QuadratureError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const CalibrationInfeasible& e) {
        err << "numeric failure: " << e.what() << " (t = " << e.t() << ", r = " << e.r() << ")\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace jumpdiff
