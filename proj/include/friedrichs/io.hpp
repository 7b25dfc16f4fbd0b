// Copyright 2026 The Friedrichs Authors
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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "friedrichs/model.hpp"
#include "friedrichs/oracle.hpp"
#include "friedrichs/settings.hpp"
#include "friedrichs/solver.hpp"
#include "friedrichs/thresholds.hpp"

namespace friedrichs::io {

inline constexpr std::string_view kSolveSchema = "friedrichs.solve_report/1";
inline constexpr std::string_view kThresholdSchema = "friedrichs.threshold_report/1";

/// A model with the numerical settings that travel with it.
struct ModelConfig {
  FriedrichsModel model;
  Numerics numerics;
};

/// Physical constants of the four-level hydrogen preset.
struct HydrogenConstants {
  static constexpr double lambda1 = 8.498e18;  // s^-1
  static constexpr double omega = 1.55e16;     // s^-1
  static constexpr double lambda_sq = 6.435e-9;
  /// Omega / Lambda_1.
  static constexpr double omega_internal() { return omega / lambda1; }
};

/// Names: "hydrogen-4level", "three-level-fig".
ModelConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Three-level rational-form-factor model with w/L = (-0.01, 0.01, 0.02) and
/// a = (0, 2, 1).
FriedrichsModel three_level_model(double lambda);
FriedrichsModel hydrogen_model();

/// Parses the JSON model file layout:
///   { "reference_cutoff": 1.0, "levels": [...], "lambda": 0.7,
///     "form_factors": [ {"family": "rational", "n_index": 1, "a": 0, "cutoff": 1}, ... ],
///     "quadrature": {...}, "pv": {...} }
/// Throws ConfigError on malformed input.
ModelConfig parse_model(const nlohmann::json& doc);
ModelConfig load_model(const std::filesystem::path& path);
nlohmann::json to_json(const FriedrichsModel& model);
nlohmann::json to_json(const Numerics& numerics);

/// FNV-1a over the canonical JSON dump of the model and settings.
std::string model_hash(const ModelConfig& config);

nlohmann::json to_json(const SolveReport& report, const FriedrichsModel& model);
nlohmann::json to_json(const ThresholdReport& report);

/// Fixed-width table of the certificate constants, with Lambda_ref and
/// optional Omega normalisation when the hydrogen preset is used.
std::string threshold_table(const ThresholdReport& report, const FriedrichsModel& model);

/// Deterministic number formatting for CSV and text output.
std::string fmt(double x);

/// Writes '#'-prefixed metadata lines.
void write_metadata(std::ostream& os, const ModelConfig& config, std::string_view command);

}  // namespace friedrichs::io
