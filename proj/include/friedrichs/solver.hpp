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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "friedrichs/model.hpp"
#include "friedrichs/quad.hpp"
#include "friedrichs/spectral.hpp"

namespace friedrichs {

struct NegativeCount {
  int count = 0;
  Eigen::VectorXd kappa_at_zero;          // kappa_n(0^-), ascending
  std::vector<std::size_t> indeterminate;  // |kappa_n(0)| <= tol_zero
};

/// Number of eigencurves with kappa_n(0^-) < -tol_zero; each such curve
/// crosses kappa = E exactly once below zero.
NegativeCount count_negative(const FriedrichsModel& model, const Numerics& numerics = {}, double tol_zero = 1e-12);

struct RootResult {
  double energy = 0.0;
  double residual = 0.0;  // kappa_n(E) - E at the returned energy
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
};

/// Bisection for kappa_n(E) = E on E < 0. Requires kappa_n(0^-) < 0.
RootResult find_root(const FriedrichsModel& model, std::size_t n, const Numerics& numerics = {});

/// Dressed eigenstate below the continuum. The continuum part is
/// f(w) = -lambda sum_n c_n v_n(w) / (w - E).
struct BoundState {
  std::size_t branch = 0;
  double energy = 0.0;
  Eigen::VectorXcd c;  // normalized with the continuum part
  double continuum_norm_sq = 0.0;
  double total_norm_sq = 0.0;
  /// Row residuals of (w_n - E) c_n + lambda \int v_n^* f dw, by direct quadrature.
  Eigen::VectorXd row_residuals;
  bool degenerate = false;
  Eigen::MatrixXcd degenerate_subspace;  // filled when degenerate

  /// Continuum amplitude f(w) for this state.
  cplx continuum_amplitude(const FriedrichsModel& model, double omega) const;
};

BoundState bound_state(const FriedrichsModel& model, std::size_t n, double energy, const Numerics& numerics = {});

struct SolveReport {
  int count = 0;
  Eigen::VectorXd kappa_at_zero;
  std::vector<BoundState> states;
  std::vector<RootResult> roots;
};

/// Counts, locates and assembles every bound state below the continuum.
SolveReport solve(const FriedrichsModel& model, const Numerics& numerics = {});

struct IndependenceReport {
  int n_independent = 0;
  Eigen::VectorXd sigma;  // ascending eigenvalues of S(E_ref)
};

/// Numerical rank of the Gram matrix S(E_ref): the number of linearly
/// independent form factors, which caps how many eigencurves a large
/// coupling can drive below zero when all levels are confined.
IndependenceReport independence_analysis(const FriedrichsModel& model, double reference_energy,
                                         const Numerics& numerics = {}, double rank_tol = 1e-10);

struct PositiveCandidate {
  std::size_t branch = 0;
  double energy = 0.0;
  /// |sum_i c_{ni} v_i(E)|; an embedded eigenvalue needs this to vanish.
  double zero_defect = 0.0;
  bool below_tolerance = false;
};

/// Sign changes of kappa_n(E) - E on a positive grid (with D(E)), refined by
/// bisection. Reports only; never certifies an embedded eigenvalue.
std::vector<PositiveCandidate> positive_candidate_scan(const FriedrichsModel& model, std::span<const double> energies,
                                                       const Numerics& numerics = {}, double defect_tol = 1e-8);

}  // namespace friedrichs
