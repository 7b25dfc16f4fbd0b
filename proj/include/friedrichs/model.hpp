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
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "friedrichs/settings.hpp"

namespace friedrichs {

using cplx = std::complex<double>;

/// All energies are stored as ratios to a reference cutoff. Form factor
/// amplitudes are in units of reference_cutoff^{1/2}.
class UnitSystem {
 public:
  UnitSystem() = default;
  explicit UnitSystem(double reference_cutoff);

  double reference_cutoff() const { return reference_cutoff_; }
  double to_internal(double physical_energy) const { return physical_energy / reference_cutoff_; }
  double to_physical(double internal_energy) const { return internal_energy * reference_cutoff_; }

 private:
  double reference_cutoff_ = 1.0;
};

// Family parameters. Energies (cutoff, lambda1, grid) are internal.

/// v(w) = L^{1/2} sqrt(x) [1 + a x^{2(n-1)}] / (1 + x^2)^{1+n},  x = w/L.
struct RationalFamily {
  int n_index = 1;
  double a = 0.0;
  double cutoff = 1.0;
};

/// Hydrogen (n+1)p -> 1s photon-emission form factors, index 1..3.
/// lambda1 is the 2p cutoff; the 3p and 4p cutoffs are (8/9) and (10/12)
/// of it.
struct HydrogenFamily {
  int index = 1;
  double lambda1 = 1.0;
};

/// Piecewise-linear complex samples. Below the first node the amplitude
/// follows (w/w0)^p, beyond the last one |v| decays as w^tail_exponent.
struct TabulatedFamily {
  std::vector<double> grid;
  std::vector<cplx> values;
  double tail_exponent = -2.0;
};

using FormFactorFamily = std::variant<RationalFamily, HydrogenFamily, TabulatedFamily>;

/// Coupling amplitude v(w) between one discrete level and the continuum
/// mode at energy w >= 0.
class FormFactor {
 public:
  static FormFactor rational(int n_index, double a, double cutoff = 1.0);
  static FormFactor hydrogen(int index, double lambda1 = 1.0);
  static FormFactor tabulated(std::vector<double> grid, std::vector<cplx> values,
                              double tail_exponent, double p_exponent = 0.5);

  const FormFactorFamily& family() const { return family_; }

  /// Threshold exponent p in v(w) ~ w^p.
  double p_exponent() const { return p_exponent_; }

  /// Energy scale where the amplitude turns over.
  double cutoff() const;

  // Energies where the profile is only piecewise smooth (tabulated nodes).
  std::vector<double> kinks() const;

  cplx value(double omega) const;
  /// dv/dw, for w > 0.
  cplx derivative(double omega) const;
  double mod_sq(double omega) const { return std::norm(value(omega)); }
  /// d|v|^2/dw. Finite at w = 0 for the built-in families.
  double mod_sq_derivative(double omega) const;

  /// When v(w) = phase * r(w) with r real, the constant phase; the real
  /// profile is then available through real_profile().
  std::optional<cplx> constant_phase() const;
  double real_profile(double omega) const;
  double real_profile_derivative(double omega) const;

  /// Returns a copy with every amplitude multiplied by s.
  FormFactor scaled(double s) const;

 private:
  // x^{1/2} P(x) / (1 + x^2)^k with x = w/scale, times amplitude*phase.
  struct PolyRational {
    cplx phase{1.0, 0.0};
    double amplitude = 1.0;
    double scale = 1.0;
    std::vector<double> numerator;  // ascending powers of x
    int denominator_power = 1;
  };

  FormFactor(FormFactorFamily family, double p_exponent);

  double poly_profile(double omega) const;
  double poly_profile_derivative(double omega) const;
  double poly_mod_sq_derivative(double omega) const;
  cplx tabulated_value(double omega) const;

  FormFactorFamily family_;
  double p_exponent_ = 0.5;
  std::optional<PolyRational> poly_;
};

/// An N-level Friedrichs model: discrete levels coupled with strength lambda
/// to the continuum [0, inf) of unit density.
class FriedrichsModel {
 public:
  /// Levels must be ascending and match form_factors in length (N >= 1).
  FriedrichsModel(std::vector<double> levels, double lambda, std::vector<FormFactor> form_factors,
                  UnitSystem units = UnitSystem{});

  std::size_t size() const { return levels_.size(); }
  const std::vector<double>& levels() const { return levels_; }
  double level(std::size_t n) const;
  double lambda() const { return lambda_; }
  double lambda_sq() const { return lambda_ * lambda_; }
  const std::vector<FormFactor>& form_factors() const { return form_factors_; }
  const FormFactor& form_factor(std::size_t n) const;
  const UnitSystem& units() const { return units_; }

  double max_cutoff() const;
  std::vector<double> kinks() const;
  double min_p_exponent() const;
  /// Number of strictly positive levels.
  std::size_t positive_level_count() const;

  FriedrichsModel with_lambda(double lambda) const;
  /// Multiplies every form factor by s.
  FriedrichsModel with_scaled_form_factors(double s) const;

 private:
  std::vector<double> levels_;
  double lambda_;
  std::vector<FormFactor> form_factors_;
  UnitSystem units_;
};

// Level indices below are zero-based.

cplx eval_form_factor(const FriedrichsModel& model, std::size_t n, double omega);
double eval_mod_sq_derivative(const FriedrichsModel& model, std::size_t n, double omega);
/// \int_0^inf |v_n(w)|^2 dw.
double l2_norm_sq(const FriedrichsModel& model, std::size_t n, const QuadratureSettings& settings = {});
/// Sum of l2_norm_sq over all levels.
double total_l2_norm_sq(const FriedrichsModel& model, const QuadratureSettings& settings = {});

}  // namespace friedrichs
