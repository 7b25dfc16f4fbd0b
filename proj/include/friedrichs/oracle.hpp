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
#include "friedrichs/settings.hpp"

namespace friedrichs::oracle {

/// Quadrature nodes and weights standing in for the continuum [0, inf).
struct ContinuumGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite Gauss-Legendre grid with M nodes: geometric panels clustered at
/// zero (a panel edge snapped onto each positive level) up to omega_max, and
/// an algebraically mapped tail beyond it.
ContinuumGrid continuum_grid(const FriedrichsModel& model, std::size_t m, double omega_max);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(std::size_t order, std::vector<double>& nodes, std::vector<double>& weights);

/// Finite Hermitian stand-in for the Hamiltonian:
///   [ diag(w_n)   C         ]
///   [ C^dagger    diag(w_j) ],  C_{nj} = lambda v_n^*(w_j) sqrt(weight_j).
struct DiscretizedHamiltonian {
  Eigen::VectorXd levels;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::MatrixXcd coupling;  // N x M

  Eigen::Index level_count() const { return levels.size(); }
  Eigen::Index dimension() const { return levels.size() + nodes.size(); }
  Eigen::MatrixXcd dense() const;
};

/// Requires M >= 10; omega_max <= 0 picks 100 * max cutoff.
DiscretizedHamiltonian discretize(const FriedrichsModel& model, std::size_t m, double omega_max = 0.0);
DiscretizedHamiltonian discretize(const FriedrichsModel& model, const ContinuumGrid& grid);

struct SubThresholdSpectrum {
  std::vector<double> energies;           // ascending, all < -gap_tol
  Eigen::MatrixXcd level_components;      // N x count, level block of each eigenvector
};

/// Eigenpairs below -gap_tol by dense diagonalization.
SubThresholdSpectrum negative_spectrum(const DiscretizedHamiltonian& h, double gap_tol = 1e-8);

/// Every eigenvalue, ascending.
Eigen::VectorXd all_eigenvalues(const DiscretizedHamiltonian& h);

struct ConvergenceRow {
  std::size_t m = 0;
  int count = 0;
  std::vector<double> energies;
  std::vector<double> abs_errors;  // against the solver, when counts match
  std::vector<double> fidelities;  // |<c_disc, c_solver>|^2, normalized
};

struct ConvergenceTable {
  int expected_count = 0;
  std::vector<double> solver_energies;
  std::vector<ConvergenceRow> rows;
  bool converged = false;
};

ConvergenceTable compare_negative_spectrum(const FriedrichsModel& model, std::span<const std::size_t> schedule,
                                           const Numerics& numerics = {}, double omega_max = 0.0,
                                           double gap_tol = 1e-8);

}  // namespace friedrichs::oracle
