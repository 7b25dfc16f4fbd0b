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

#include "friedrichs/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "friedrichs/errors.hpp"

namespace friedrichs {

namespace {

constexpr int kContourNodes = 256;

double contour_radius(const FriedrichsModel& model, std::size_t n) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < model.size(); ++m)
    if (m != n) gap = std::min(gap, std::abs(model.level(n) - model.level(m)));
  if (gap == 0.0) throw DegeneracyError("projector series needs a nondegenerate level");
  return gap / 3.0;
}

}  // namespace

double EigenCurvePoint::norm() const {
  if (kappa.size() == 0) return 0.0;
  return std::max(std::abs(kappa(0)), std::abs(kappa(kappa.size() - 1)));
}

Eigen::MatrixXcd k_matrix(const FriedrichsModel& model, const LevelShiftMatrix& shift) {
  const auto n = static_cast<Eigen::Index>(model.size());
  if (shift.size() != n) throw DomainError("shift matrix dimension does not match the model");
  Eigen::MatrixXcd k = -model.lambda_sq() * shift.entries;
  for (Eigen::Index i = 0; i < n; ++i) k(i, i) += model.level(static_cast<std::size_t>(i));
  return k;
}

EigenCurvePoint eigh(const Eigen::MatrixXcd& k, double energy) {
  if (k.rows() != k.cols()) throw DomainError("eigh needs a square matrix");
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw DomainError("eigh needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
  if (es.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver did not converge");
  return {energy, es.eigenvalues(), es.eigenvectors()};
}

EigenCurvePoint kappa_at(const FriedrichsModel& model, double energy, const Numerics& numerics) {
  return eigh(k_matrix(model, shift_matrix(model, energy, numerics)), energy);
}

std::vector<EigenCurvePoint> kappa_curve(const FriedrichsModel& model, std::span<const double> energies,
                                         const Numerics& numerics) {
  if (!std::is_sorted(energies.begin(), energies.end())) throw DomainError("kappa_curve needs a sorted grid");
  std::vector<EigenCurvePoint> out;
  out.reserve(energies.size());
  for (double e : energies) out.push_back(kappa_at(model, e, numerics));
  return out;
}

Eigen::MatrixXcd projector(const EigenCurvePoint& point, std::size_t n) {
  const auto idx = static_cast<Eigen::Index>(n);
  if (idx >= point.kappa.size()) throw DomainError("projector index out of range");
  const double tol = 1e-12 * std::max(point.norm(), std::numeric_limits<double>::min());
  if (idx > 0 && point.kappa(idx) - point.kappa(idx - 1) <= tol)
    throw DegeneracyError("eigenvalue is degenerate with its lower neighbour");
  if (idx + 1 < point.kappa.size() && point.kappa(idx + 1) - point.kappa(idx) <= tol)
    throw DegeneracyError("eigenvalue is degenerate with its upper neighbour");
  const Eigen::VectorXcd v = point.vectors.col(idx);
  return v * v.adjoint();
}

Eigen::MatrixXcd projector_coefficient(const FriedrichsModel& model, const LevelShiftMatrix& shift, std::size_t n,
                                       int order) {
  const auto dim = static_cast<Eigen::Index>(model.size());
  if (shift.size() != dim) throw DomainError("shift matrix dimension does not match the model");
  if (order < 0) throw DomainError("projector order must be nonnegative");
  const auto idx = static_cast<Eigen::Index>(n);
  if (idx >= dim) throw DomainError("projector index out of range");
  if (order == 0 || dim == 1) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
    if (order == 0) p(idx, idx) = 1.0;
    return p;
  }
  const double radius = contour_radius(model, n);
  const double center = model.level(n);
  // P^{(j)} = -(1/2 pi i) \oint R (D R)^j dz with R = (K0 - z)^{-1};
  // z = c + r e^{i t}, dz = i r e^{i t} dt.
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < kContourNodes; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kContourNodes;
    const cplx e_it = std::polar(1.0, t);
    const cplx z = center + radius * e_it;
    Eigen::VectorXcd r(dim);
    for (Eigen::Index m = 0; m < dim; ++m) r(m) = 1.0 / (model.level(static_cast<std::size_t>(m)) - z);
    Eigen::MatrixXcd term = r.asDiagonal();
    for (int j = 0; j < order; ++j) term = (term * shift.entries) * r.asDiagonal();
    acc += e_it * term;
  }
  return -(radius / kContourNodes) * acc;
}

ProjectorSeries projector_series(const FriedrichsModel& model, const LevelShiftMatrix& shift, std::size_t n,
                                 int order) {
  const auto dim = static_cast<Eigen::Index>(model.size());
  ProjectorSeries out;
  out.partial_sum = projector_coefficient(model, shift, n, 0);
  if (dim == 1) {
    out.partial_sum(0, 0) = 1.0;
    return out;
  }
  out.contraction = model.lambda_sq() * shift.norm() / contour_radius(model, n);
  out.may_diverge = out.contraction >= 1.0;
  double weight = 1.0;
  for (int j = 1; j <= order; ++j) {
    weight *= model.lambda_sq();
    out.partial_sum += weight * projector_coefficient(model, shift, n, j);
  }
  return out;
}

}  // namespace friedrichs
