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

#include <complex>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "friedrichs/model.hpp"
#include "friedrichs/settings.hpp"

namespace friedrichs {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

using RealIntegrand = std::function<double(double)>;

/// Adaptive integral over [a, b]. Integrable endpoint singularities are
/// handled by extrapolation. Throws QuadratureError on nonconvergence.
QuadResult integrate(const RealIntegrand& f, double a, double b, const QuadratureSettings& settings = {});

/// Adaptive integral over [0, inf). Panels are split at the sorted positive
/// entries of `breakpoints`; past split_point the tail is mapped onto [0, 1)
/// with w = split_point + scale * t / (1 - t).
QuadResult integrate_semiinf(const RealIntegrand& f, const QuadratureSettings& settings = {},
                             double scale = 1.0, std::span<const double> breakpoints = {},
                             double split_point = 10.0);

/// phi_delta(x) = exp[1 - 1/(1 - (x/delta)^2)] on |x| < delta, else 0.
double bump(double x, double delta);
/// d phi_delta / dx.
double bump_derivative(double x, double delta);

enum class ShiftKind { S, T, D };

/// N x N Hermitian level-shift matrix S(E), T(E, E2) or D(E).
struct LevelShiftMatrix {
  Eigen::MatrixXcd entries;
  Eigen::MatrixXd error;  // per-entry quadrature error estimate
  double energy = 0.0;
  double energy2 = 0.0;  // second argument of T, equal to energy otherwise
  ShiftKind kind = ShiftKind::S;

  Eigen::Index size() const { return entries.rows(); }
  /// Largest |eigenvalue|.
  double norm() const;
  /// Eigenvalues in ascending order.
  Eigen::VectorXd eigenvalues() const;
};

/// S_{nm}(E) = \int_0^inf v_n^*(w) v_m(w) / (w - E) dw for E < 0 (E = 0 is
/// accepted when every p_exponent > 0).
LevelShiftMatrix gram_matrix(const FriedrichsModel& model, double energy, const Numerics& numerics = {});

/// T_{nm}(E, E2) = \int_0^inf v_n^* v_m / ((w - E)(w - E2)) dw for E2 <= E < 0.
LevelShiftMatrix t_matrix(const FriedrichsModel& model, double energy, double energy2,
                          const Numerics& numerics = {});

/// Principal value D_{nm}(E) = P\int_0^inf v_n^* v_m / (w - E) dw for E >= 0,
/// computed from the absolutely convergent bump-subtracted integrand.
LevelShiftMatrix pv_matrix(const FriedrichsModel& model, double energy, const Numerics& numerics = {});

/// S(E) for E < 0 and D(E) for E >= 0.
LevelShiftMatrix shift_matrix(const FriedrichsModel& model, double energy, const Numerics& numerics = {});

/// Principal value of \int_0^inf eta(w)/(w - E) dw for a scalar profile with
/// known derivative; exposed for single-channel checks.
QuadResult pv_integral(const RealIntegrand& eta, const RealIntegrand& eta_derivative, double energy,
                       double scale, const Numerics& numerics = {}, std::span<const double> breakpoints = {});

}  // namespace friedrichs
