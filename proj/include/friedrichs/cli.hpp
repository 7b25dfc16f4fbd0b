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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "friedrichs/io.hpp"

namespace friedrichs::cli {

enum class Command { Analyze, SweepLambda, KappaCurves, Thresholds, OracleCheck };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::Analyze;
  std::string preset;
  std::filesystem::path model_file;
  std::filesystem::path out_dir = ".";
  std::optional<double> lambda;
  std::optional<double> lambda_sq;
  double lambda_min = 0.1;
  double lambda_max = 10.0;
  int lambda_steps = 60;
  double e_min = -0.5;
  double e_max = 0.05;
  int e_steps = 200;
  std::vector<std::size_t> branches;  // one-based; empty means all
  std::vector<std::size_t> grid{500, 1000, 2000, 4000};
  double omega_max = 0.0;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
};

/// Resolves the model source and applies overrides. Throws ConfigError.
io::ModelConfig resolve_model(const RunConfig& config);

// Each command writes its files under config.out_dir and returns an exit code.
int analyze(const RunConfig& config, std::ostream& log);
int sweep_lambda(const RunConfig& config, std::ostream& log);
int kappa_curves(const RunConfig& config, std::ostream& log);
int thresholds(const RunConfig& config, std::ostream& log);
int oracle_check(const RunConfig& config, std::ostream& log);

/// Parses argv, dispatches, and maps exceptions to exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace friedrichs::cli
