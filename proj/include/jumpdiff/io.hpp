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

#include "jumpdiff/density_series.hpp"
#include "jumpdiff/envelopes.hpp"
#include "jumpdiff/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace jumpdiff::io {

/// 17 significant digits, "%.17g".
std::string format_double(double value);

/// Columns y,value,method,error_bound (KDE adds ci_half_width).
void write_curve_csv(std::ostream& out, const DensityCurve& curve);
/// CSV plus `<path>.json` sidecar with t, x, jump rate, law, grid and truncation.
void write_curve(const std::filesystem::path& csv_path, const DensityCurve& curve);
/// Reads a curve written by write_curve; the sidecar is optional.
DensityCurve read_curve(const std::filesystem::path& csv_path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Columns path,jumps,x0[,x1,...].
void write_ensemble_csv(std::ostream& out, const PathEnsemble& ensemble);
/// Little-endian: "JDIFFENS", u32 version, u64 N, u32 d, f64 t, u64 seed,
/// N*d f64 terminal values, N u32 jump counts.
void write_ensemble_binary(const std::filesystem::path& path, const PathEnsemble& ensemble);
PathEnsemble read_ensemble_binary(const std::filesystem::path& path);

std::string envelopes_to_json(const EnvelopeSet& set);
EnvelopeSet envelopes_from_json(const std::string& text);
void write_envelopes(const std::filesystem::path& path, const EnvelopeSet& set);
EnvelopeSet read_envelopes(const std::filesystem::path& path);

/// Columns t,r,lower,value,upper,margin,pass.
void write_containment_csv(std::ostream& out, const ContainmentReport& report);

struct BoundsRow {
    double r = 0.0;
    double tail_bound = 0.0;
    double density_envelope = 0.0;
};
/// Columns r,tail_bound,density_envelope.
void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace jumpdiff::io
