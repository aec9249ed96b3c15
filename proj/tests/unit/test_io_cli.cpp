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
#include "jumpdiff/io.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace jumpdiff;
namespace fs = std::filesystem;

namespace {

fs::path config_file(const std::string& name) {
    return fs::path(JUMPDIFF_SOURCE_DIR) / "configs" / name;
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               (std::string("jumpdiff_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int cli(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return run_cli(args, out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

using IoTest = TempDir;
using CliTest = TempDir;

DensityCurve sample_curve() {
    return linear_density(JumpLaw::gaussian(1.0), 1.0, 0.5, 0.25, UniformGrid(4.0, 81), 1e-12);
}

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
        EXPECT_EQ(std::stod(io::format_double(v)), v);
    }
}

TEST_F(IoTest, CurveRoundTrip) {
    const auto c = sample_curve();
    io::write_curve(dir_ / "c.csv", c);
    EXPECT_TRUE(fs::exists(io::sidecar_path(dir_ / "c.csv")));
    const auto back = io::read_curve(dir_ / "c.csv");
    EXPECT_EQ(back.values, c.values);
    EXPECT_EQ(back.error_bound, c.error_bound);
    EXPECT_EQ(back.grid, c.grid);
    EXPECT_EQ(back.t, c.t);
    EXPECT_EQ(back.x, c.x);
    EXPECT_EQ(back.method, c.method);
    std::ifstream in(dir_ / "c.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "y,value,method,error_bound");
}

TEST_F(IoTest, CurveWithoutSidecar) {
    const auto c = sample_curve();
    io::write_curve(dir_ / "c.csv", c);
    fs::remove(io::sidecar_path(dir_ / "c.csv"));
    const auto back = io::read_curve(dir_ / "c.csv");
    EXPECT_EQ(back.values, c.values);
    EXPECT_NEAR(back.x, c.x, 1e-15);
    EXPECT_NEAR(back.grid.step(), c.grid.step(), 1e-15);
}

TEST_F(IoTest, EnsembleBinaryRoundTrip) {
    const auto spec = ModelSpec::linear(1, 2.0, JumpLaw::laplace(1.0));
    SimConfig cfg;
    cfg.path_count = 500;
    cfg.step_count = 8;
    cfg.seed = 77;
    const double x[] = {0.5};
    const auto e = simulate_terminal(spec, x, 1.0, cfg);
    io::write_ensemble_binary(dir_ / "e.bin", e);
    const auto back = io::read_ensemble_binary(dir_ / "e.bin");
    EXPECT_EQ(back.terminal_values, e.terminal_values);
    EXPECT_EQ(back.jump_counts, e.jump_counts);
    EXPECT_EQ(back.t, e.t);
    EXPECT_EQ(back.provenance.seed, 77u);
    io::write_text(dir_ / "bad.bin", "NOTANENSEMBLE");
    EXPECT_THROW(io::read_ensemble_binary(dir_ / "bad.bin"), std::runtime_error);
}

TEST(Io, EnsembleCsvHeader) {
    PathEnsemble e;
    e.dimension = 2;
    e.terminal_values = {1.0, 2.0, 3.0, 4.0};
    e.jump_counts = {0, 3};
    std::ostringstream out;
    io::write_ensemble_csv(out, e);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "path,jumps,x0,x1");
    EXPECT_NE(out.str().find("1,3,3,4"), std::string::npos);
}

TEST(Io, EnvelopesJsonRoundTrip) {
    EnvelopeSet s;
    s.kind = EnvelopeKind::laplace_jump;
    s.constants = {1.0, 1.0, 3.5, 2.25, 2.0, 4.125};
    s.horizon = 2.0;
    s.calibration = CalibrationSource::fitted;
    s.validity = ValidityRegion{UniformGrid(8.0, 321), {0.1, 1.0}, 0.0, 1e-12};
    s.tail_model = TailModel{0.3, 1.5, 2.0, JumpLaw::laplace(2.0)};
    const auto back = io::envelopes_from_json(io::envelopes_to_json(s));
    EXPECT_EQ(back.kind, s.kind);
    EXPECT_EQ(back.constants.C_T, 3.5);
    EXPECT_EQ(back.constants.c_T, 2.25);
    EXPECT_EQ(back.constants.C_qT, 4.125);
    EXPECT_EQ(back.horizon, 2.0);
    ASSERT_TRUE(back.validity.has_value());
    EXPECT_EQ(back.validity->grid, s.validity->grid);
    EXPECT_EQ(back.validity->times, s.validity->times);
    ASSERT_TRUE(back.tail_model.has_value());
    EXPECT_EQ(back.tail_model->drift_bound, 0.3);
    EXPECT_TRUE(back.tail_model->law.is_laplace());
    EXPECT_THROW(io::envelopes_from_json("{}"), std::exception);
}

TEST(Config, ParsesCatalogModel) {
    const auto cfg = load_config(config_file("bounded_coefficients.yaml"));
    EXPECT_FALSE(cfg.model.is_linear());
    EXPECT_TRUE(cfg.model.jump_law.is_laplace());
    EXPECT_GT(cfg.model.drift_bound, 0.0);
    EXPECT_FALSE(cfg.source_text.empty());
}

TEST(Config, RejectsUnknownKeys) {
    EXPECT_THROW(parse_config("model:\n  dimension: 1\n  jump_rate: 1\n  colour: red\n"
                              "jump_law:\n  kind: gaussian\n  variance: 1\n"),
                 ConfigError);
    EXPECT_THROW(parse_config("model:\n  dimension: 1\n  jump_rate: -1\n"
                              "jump_law:\n  kind: gaussian\n  variance: 1\n"),
                 ConfigError);
    EXPECT_THROW(parse_config("jump_law:\n  kind: cauchy\n"), ConfigError);
}

TEST(Config, ReadsDefaults) {
    const auto cfg = load_config(config_file("linear_gaussian.yaml"));
    ASSERT_TRUE(cfg.defaults.seed.has_value());
    EXPECT_EQ(*cfg.defaults.seed, 20260101u);
    EXPECT_EQ(cfg.defaults.times, (std::vector<double>{0.1, 0.5, 1.0}));
    EXPECT_DOUBLE_EQ(cfg.defaults.grid_step, 0.05);
}

TEST_F(CliTest, DensityClosedFormPeak) {
    ASSERT_EQ(cli({"density", config_file("linear_gaussian.yaml").string(), "--method", "closed",
                   "--out", dir_.string()}),
              kExitOk)
        << err_.str();
    const auto c = io::read_curve(dir_ / "curve.csv");
    EXPECT_NEAR(c.values[c.grid.center()], 0.3085, 5e-5);
    const auto manifest = nlohmann::json::parse(io::read_text(dir_ / "manifest.json"));
    EXPECT_EQ(manifest["subcommand"], "density");
    EXPECT_FALSE(manifest["config_snapshot"].get<std::string>().empty());
}

TEST_F(CliTest, CalibrateThenCheckPasses) {
    const auto cfg = config_file("linear_gaussian.yaml").string();
    ASSERT_EQ(cli({"calibrate", cfg, "--out", (dir_ / "cal").string()}), kExitOk) << err_.str();
    ASSERT_EQ(cli({"density", cfg, "--method", "closed", "--t", "0.5", "--out",
                   (dir_ / "den").string()}),
              kExitOk);
    EXPECT_EQ(cli({"check", cfg, "--envelopes", (dir_ / "cal" / "envelopes.json").string(),
                   "--curve", (dir_ / "den" / "curve.csv").string(), "--out",
                   (dir_ / "chk").string()}),
              kExitOk)
        << err_.str();
    EXPECT_TRUE(fs::exists(dir_ / "chk" / "containment.csv"));
}

TEST_F(CliTest, CorruptedConstantsExitTwo) {
    const auto cfg = config_file("linear_gaussian.yaml").string();
    ASSERT_EQ(cli({"calibrate", cfg, "--out", (dir_ / "cal").string()}), kExitOk);
    ASSERT_EQ(cli({"density", cfg, "--method", "closed", "--out", (dir_ / "den").string()}),
              kExitOk);
    auto json = nlohmann::json::parse(io::read_text(dir_ / "cal" / "envelopes.json"));
    json["constants"]["C_T"] = 1.01;
    io::write_text(dir_ / "bad.json", json.dump());
    EXPECT_EQ(cli({"check", cfg, "--envelopes", (dir_ / "bad.json").string(), "--curve",
                   (dir_ / "den" / "curve.csv").string(), "--out", (dir_ / "chk").string()}),
              kExitViolation);
    EXPECT_NE(err_.str().find("first at t = "), std::string::npos);
    EXPECT_NE(err_.str().find(", r = "), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExitOne) {
    EXPECT_EQ(cli({"density", (dir_ / "missing.yaml").string(), "--out", dir_.string()}),
              kExitConfig);
    EXPECT_EQ(cli({"density", config_file("linear_gaussian.yaml").string(), "--method", "fft",
                   "--out", dir_.string()}),
              kExitConfig);
    EXPECT_EQ(cli({"simulate", config_file("linear_gaussian.yaml").string(), "--t", "5", "--out",
                   dir_.string()}),
              kExitConfig);
    EXPECT_EQ(cli({"frobnicate"}), kExitConfig);
}

TEST_F(CliTest, NumericFailureExitsThree) {
    EXPECT_EQ(cli({"density", config_file("linear_laplace.yaml").string(), "--method", "fft",
                   "--step", "2e-6", "--out", dir_.string()}),
              kExitNumeric)
        << err_.str();
}

TEST_F(CliTest, SimulateWritesManifestAndFiles) {
    ASSERT_EQ(cli({"simulate", config_file("bounded_coefficients.yaml").string(), "--paths", "200",
                   "--seed", "5", "--format", "both", "--out", dir_.string()}),
              kExitOk)
        << err_.str();
    EXPECT_TRUE(fs::exists(dir_ / "ensemble.bin"));
    EXPECT_TRUE(fs::exists(dir_ / "ensemble.csv"));
    const auto manifest = nlohmann::json::parse(io::read_text(dir_ / "manifest.json"));
    EXPECT_EQ(manifest["seed"], 5);
    EXPECT_EQ(manifest["outputs"].size(), 2u);
    const auto e = io::read_ensemble_binary(dir_ / "ensemble.bin");
    EXPECT_EQ(e.size(), 200u);
}

TEST_F(CliTest, BoundsCsv) {
    ASSERT_EQ(cli({"bounds", config_file("linear_laplace.yaml").string(), "--points", "11",
                   "--out", dir_.string()}),
              kExitOk)
        << err_.str();
    const auto text = io::read_text(dir_ / "bounds.csv");
    EXPECT_EQ(text.substr(0, text.find('\n')), "r,tail_bound,density_envelope");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 12);
}
