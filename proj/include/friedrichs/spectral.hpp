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

namespace friedrichs {

/// Sorted eigensystem of K(E) at one energy.
struct EigenCurvePoint {
  double energy = 0.0;
  Eigen::VectorXd kappa;     // ascending
  Eigen::MatrixXcd vectors;  // column n belongs to kappa(n)

  double norm() const;
};

/// K(E) = diag(w) - lambda^2 * shift.
Eigen::MatrixXcd k_matrix(const FriedrichsModel& model, const LevelShiftMatrix& shift);

/// Full Hermitian eigendecomposition with ascending eigenvalues.
EigenCurvePoint eigh(const Eigen::MatrixXcd& k, double energy = 0.0);

/// K(E) eigensystem, using S(E) below threshold and D(E) at and above it.
EigenCurvePoint kappa_at(const FriedrichsModel& model, double energy, const Numerics& numerics = {});

/// Eigencurves over a sorted grid of energies.
std::vector<EigenCurvePoint> kappa_curve(const FriedrichsModel& model, std::span<const double> energies,
                                         const Numerics& numerics = {});

/// Rank-one spectral projector onto eigenvector n. Throws DegeneracyError if
/// kappa(n) is within 1e-12 * ||K|| of a neighbour.
Eigen::MatrixXcd projector(const EigenCurvePoint& point, std::size_t n);

struct ProjectorSeries {
  Eigen::MatrixXcd partial_sum;
  /// lambda^2 ||shift|| / radius; the series converges when this is < 1.
  double contraction = 0.0;
  bool may_diverge = false;
};

/// Perturbative projector |n><n| + sum_{j=1}^{order} lambda^{2j} P_n^{(j)},
/// each term from a 256-node trapezoid rule on the circle of radius
/// min_{m != n} |w_n - w_m| / 3 around w_n.
ProjectorSeries projector_series(const FriedrichsModel& model, const LevelShiftMatrix& shift, std::size_t n,
                                 int order);

/// The j-th order coefficient P_n^{(j)} on its own.
Eigen::MatrixXcd projector_coefficient(const FriedrichsModel& model, const LevelShiftMatrix& shift, std::size_t n,
                                       int order);

}  // namespace friedrichs
