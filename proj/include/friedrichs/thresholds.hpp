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
#include <optional>
#include <string>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/settings.hpp"

namespace friedrichs {

struct SupNorm {
  double value = 0.0;      // sup_{E>0} ||D(E)||
  double argmax = 0.0;     // E*
  double grid_min = 0.0;   // searched range
  double grid_max = 0.0;
  double tail_value = 0.0;  // ||D(grid_max)||, bounds the unsearched tail
};

struct SupSearch {
  int log_points = 400;
  double min_factor = 1e-6;   // grid starts at min_factor * max cutoff
  double max_factor = 100.0;  // and ends at max_factor * max cutoff
  double rel_tol = 1e-4;      // golden-section refinement
};

/// Spectral-norm maximum of D(E) over E in (0, E_max], from a log grid and
/// golden-section refinement around the best grid point.
SupNorm sup_d_norm(const FriedrichsModel& model, const Numerics& numerics = {}, const SupSearch& search = {});

/// min{ w_{N-N+ +1}/3, min_{n != m} |w_n - w_m|/3 }. Throws DomainError with
/// no positive level and DegeneracyError on coinciding levels.
double r_a(const FriedrichsModel& model);

/// sqrt(R / sup||D||).
double coupling_threshold(double radius, const SupNorm& sup);
double lambda_a(const FriedrichsModel& model, const SupNorm& sup);

struct RbResult {
  double r_b = 0.0;
  double lambda_b = 0.0;
  std::string diagnostic;
};

/// Largest R with D(E') positive semidefinite (to 1e-10 sup||D||) for all
/// E' in (0, R).
RbResult r_b_lambda_b(const FriedrichsModel& model, const SupNorm& sup, const Numerics& numerics = {},
                      const SupSearch& search = {});

/// min_{m != n} |w_n - w_m| / 3.
double level_gap_third(const FriedrichsModel& model, std::size_t n);
double lambda_n(const FriedrichsModel& model, std::size_t n, const SupNorm& sup);

struct LevelConstants {
  double alpha = 0.0;                 // |v_n(w_n)|^2
  double beta = 0.0;                  // gap/3 * sup_{w>0} |d|v_n|^2/dw|
  double gamma = 0.0;                 // sum_i sup_{|w - w_n| < R_a} |v_i|^2
  double mod_sq_derivative_sup = 0.0;
  double mod_sq_derivative_argmax = 0.0;
};

LevelConstants alpha_beta_gamma(const FriedrichsModel& model, std::size_t n, double r_a_value);

/// sqrt( lambda_n^2/(2 beta) [s - sqrt(s^2 - 4 alpha beta)] ), s = alpha + beta + gamma.
/// Throws DomainError when alpha or beta is not positive.
double lambda_bar(double lambda_n_value, double alpha, double beta, double gamma);

enum class Verdict { Certified, NotCertified, Inapplicable };

std::string to_string(Verdict v);

struct LevelThreshold {
  std::size_t level = 0;  // zero-based
  double lambda_n = 0.0;
  LevelConstants constants;
  double lambda_bar = 0.0;
};

struct ThresholdReport {
  SupNorm sup_d;
  std::size_t n_plus = 0;
  double r_a = 0.0;
  double r_b = 0.0;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  std::vector<LevelThreshold> levels;
  double bound = 0.0;                  // min{lambda_a, lambda_b, lambda_bar_n}
  double bound_without_lambda_b = 0.0;  // min{lambda_a, lambda_bar_n}
  std::string binding;                 // name of the constant attaining `bound`
  double lambda = 0.0;
  Verdict verdict = Verdict::Inapplicable;
  std::vector<std::string> diagnostics;
};

/// Evaluates every constant of the weak-coupling certificate against the
/// absence of eigenvalues embedded in the continuum. Hypothesis violations
/// give Verdict::Inapplicable, never NotCertified.
ThresholdReport verdict(const FriedrichsModel& model, const Numerics& numerics = {}, const SupSearch& search = {});

/// Same, with a precomputed sup||D||.
ThresholdReport verdict(const FriedrichsModel& model, const SupNorm& sup, const Numerics& numerics = {},
                        const SupSearch& search = {});

}  // namespace friedrichs
