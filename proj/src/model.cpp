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

#include "friedrichs/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "friedrichs/errors.hpp"
#include "friedrichs/quad.hpp"

namespace friedrichs {

namespace {

double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double eval_poly_derivative(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

}  // namespace

UnitSystem::UnitSystem(double reference_cutoff) : reference_cutoff_(reference_cutoff) {
  if (!(reference_cutoff > 0.0) || !std::isfinite(reference_cutoff))
    throw DomainError("reference_cutoff must be positive and finite");
}

void QuadratureSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 10) throw DomainError("max_subdivisions must be at least 10");
}

double PvSettings::delta(double energy) const { return std::min(0.5 * energy, delta_cap); }

void PvSettings::validate() const {
  if (!(delta_cap > 0.0)) throw DomainError("delta_cap must be positive");
}

// ---------------------------------------------------------------------------
// FormFactor

FormFactor::FormFactor(FormFactorFamily family, double p_exponent)
    : family_(std::move(family)), p_exponent_(p_exponent) {}

FormFactor FormFactor::rational(int n_index, double a, double cutoff) {
  if (n_index < 1) throw DomainError("rational form factor needs n_index >= 1");
  if (!(cutoff > 0.0)) throw DomainError("rational form factor needs a positive cutoff");
  FormFactor ff(RationalFamily{n_index, a, cutoff}, 0.5);
  PolyRational pr;
  pr.amplitude = std::sqrt(cutoff);
  pr.scale = cutoff;
  pr.numerator.assign(static_cast<std::size_t>(2 * (n_index - 1)) + 1, 0.0);
  pr.numerator.front() += 1.0;
  pr.numerator.back() += a;
  pr.denominator_power = 1 + n_index;
  ff.poly_ = std::move(pr);
  return ff;
}

FormFactor FormFactor::hydrogen(int index, double lambda1) {
  if (index < 1 || index > 3) throw DomainError("hydrogen form factor index must be 1, 2 or 3");
  if (!(lambda1 > 0.0)) throw DomainError("hydrogen cutoff must be positive");
  FormFactor ff(HydrogenFamily{index, lambda1}, 0.5);
  PolyRational pr;
  // v^*(w) = i * (...), so v(w) = -i * (...).
  pr.phase = cplx(0.0, -1.0);
  pr.amplitude = std::sqrt(lambda1);
  switch (index) {
    case 1:
      pr.scale = lambda1;
      pr.numerator = {1.0};
      pr.denominator_power = 2;
      break;
    case 2:
      pr.amplitude *= 81.0 / (128.0 * std::numbers::sqrt2);
      pr.scale = (8.0 / 9.0) * lambda1;
      pr.numerator = {1.0, 0.0, 2.0};
      pr.denominator_power = 3;
      break;
    default:
      pr.amplitude *= 54.0 * std::numbers::sqrt3 / 15625.0;
      pr.scale = (10.0 / 12.0) * lambda1;
      pr.numerator = {45.0, 0.0, 146.0, 0.0, 125.0};
      pr.denominator_power = 4;
      break;
  }
  ff.poly_ = std::move(pr);
  return ff;
}

FormFactor FormFactor::tabulated(std::vector<double> grid, std::vector<cplx> values, double tail_exponent,
                                 double p_exponent) {
  if (grid.size() < 2 || grid.size() != values.size())
    throw DomainError("tabulated form factor needs matching grid/values with at least two nodes");
  if (grid.front() < 0.0) throw DomainError("tabulated grid must start at w >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("tabulated grid must be strictly increasing");
  if (!(tail_exponent < -0.5)) throw DomainError("tail_exponent must be < -1/2 for square integrability");
  if (!(p_exponent >= 0.0)) throw DomainError("p_exponent must be nonnegative");
  return FormFactor(TabulatedFamily{std::move(grid), std::move(values), tail_exponent}, p_exponent);
}

double FormFactor::cutoff() const {
  return std::visit(
      [](const auto& fam) -> double {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, RationalFamily>) return fam.cutoff;
        else if constexpr (std::is_same_v<T, HydrogenFamily>) return fam.lambda1;
        else return fam.grid.back();
      },
      family_);
}

std::vector<double> FormFactor::kinks() const {
  if (const auto* tab = std::get_if<TabulatedFamily>(&family_)) return tab->grid;
  return {};
}

double FormFactor::poly_profile(double omega) const {
  const auto& pr = *poly_;
  const double x = omega / pr.scale;
  return pr.amplitude * std::sqrt(x) * eval_poly(pr.numerator, x) / std::pow(1.0 + x * x, pr.denominator_power);
}

double FormFactor::poly_profile_derivative(double omega) const {
  const auto& pr = *poly_;
  const double x = omega / pr.scale;
  const double q = 1.0 + x * x;
  const double p = eval_poly(pr.numerator, x);
  const double dp = eval_poly_derivative(pr.numerator, x);
  const double k = pr.denominator_power;
  // d/dx [x^{1/2} P / q^k] = x^{-1/2} [P/2 + x P' - 2k x^2 P / q] / q^k
  const double bracket = 0.5 * p + x * dp - 2.0 * k * x * x * p / q;
  return pr.amplitude * bracket / (std::sqrt(x) * std::pow(q, k)) / pr.scale;
}

double FormFactor::poly_mod_sq_derivative(double omega) const {
  const auto& pr = *poly_;
  const double x = omega / pr.scale;
  const double q = 1.0 + x * x;
  const double p = eval_poly(pr.numerator, x);
  const double dp = eval_poly_derivative(pr.numerator, x);
  const double k = pr.denominator_power;
  // d/dx [x P^2 / q^{2k}] = [P^2 + 2x P P' - 4k x^2 P^2 / q] / q^{2k}
  const double bracket = p * p + 2.0 * x * p * dp - 4.0 * k * x * x * p * p / q;
  return pr.amplitude * pr.amplitude * bracket / std::pow(q, 2.0 * k) / pr.scale;
}

cplx FormFactor::tabulated_value(double omega) const {
  const auto& tab = std::get<TabulatedFamily>(family_);
  const auto& g = tab.grid;
  const auto& v = tab.values;
  if (omega <= g.front()) {
    if (g.front() == 0.0) return v.front();
    return v.front() * std::pow(omega / g.front(), p_exponent_);
  }
  if (omega >= g.back()) return v.back() * std::pow(omega / g.back(), tab.tail_exponent);
  const auto it = std::upper_bound(g.begin(), g.end(), omega);
  const auto hi = static_cast<std::size_t>(it - g.begin());
  const auto lo = hi - 1;
  const double t = (omega - g[lo]) / (g[hi] - g[lo]);
  return (1.0 - t) * v[lo] + t * v[hi];
}

cplx FormFactor::value(double omega) const {
  if (omega < 0.0 || std::isnan(omega)) throw DomainError("form factor evaluated at negative energy");
  if (poly_) return poly_->phase * poly_profile(omega);
  return tabulated_value(omega);
}

cplx FormFactor::derivative(double omega) const {
  if (omega < 0.0 || std::isnan(omega)) throw DomainError("form factor derivative at negative energy");
  if (poly_) return poly_->phase * poly_profile_derivative(omega);
  const double h = 1e-6 * std::max(omega, 1e-6);
  const double lo = std::max(0.0, omega - h);
  return (tabulated_value(omega + h) - tabulated_value(lo)) / (omega + h - lo);
}

double FormFactor::mod_sq_derivative(double omega) const {
  if (omega < 0.0 || std::isnan(omega)) throw DomainError("form factor derivative at negative energy");
  if (poly_) return poly_mod_sq_derivative(omega);
  const double h = 1e-6 * std::max(omega, 1e-6);
  const double lo = std::max(0.0, omega - h);
  return (std::norm(tabulated_value(omega + h)) - std::norm(tabulated_value(lo))) / (omega + h - lo);
}

std::optional<cplx> FormFactor::constant_phase() const {
  if (poly_) return poly_->phase;
  const auto& tab = std::get<TabulatedFamily>(family_);
  for (const auto& z : tab.values)
    if (z.imag() != 0.0) return std::nullopt;
  return cplx(1.0, 0.0);
}

double FormFactor::real_profile(double omega) const {
  if (poly_) return poly_profile(omega);
  return tabulated_value(omega).real();
}

double FormFactor::real_profile_derivative(double omega) const {
  if (poly_) return poly_profile_derivative(omega);
  return derivative(omega).real();
}

FormFactor FormFactor::scaled(double s) const {
  FormFactor out = *this;
  if (out.poly_) {
    out.poly_->amplitude *= s;
  } else {
    auto& tab = std::get<TabulatedFamily>(out.family_);
    for (auto& z : tab.values) z *= s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// FriedrichsModel

FriedrichsModel::FriedrichsModel(std::vector<double> levels, double lambda, std::vector<FormFactor> form_factors,
                                 UnitSystem units)
    : levels_(std::move(levels)), lambda_(lambda), form_factors_(std::move(form_factors)), units_(units) {
  if (levels_.empty()) throw DomainError("model needs at least one level");
  if (levels_.size() != form_factors_.size())
    throw DomainError("model needs one form factor per level");
  if (!std::is_sorted(levels_.begin(), levels_.end()))
    throw DomainError("levels must be sorted in ascending order");
  for (double w : levels_)
    if (!std::isfinite(w)) throw DomainError("levels must be finite");
  if (!std::isfinite(lambda_)) throw DomainError("lambda must be finite");
}

double FriedrichsModel::level(std::size_t n) const {
  if (n >= levels_.size()) throw DomainError("level index out of range");
  return levels_[n];
}

const FormFactor& FriedrichsModel::form_factor(std::size_t n) const {
  if (n >= form_factors_.size()) throw DomainError("level index out of range");
  return form_factors_[n];
}

double FriedrichsModel::max_cutoff() const {
  double c = 0.0;
  for (const auto& ff : form_factors_) c = std::max(c, ff.cutoff());
  return c;
}

std::vector<double> FriedrichsModel::kinks() const {
  std::vector<double> out;
  for (const auto& ff : form_factors_) {
    const auto k = ff.kinks();
    out.insert(out.end(), k.begin(), k.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double FriedrichsModel::min_p_exponent() const {
  double p = form_factors_.front().p_exponent();
  for (const auto& ff : form_factors_) p = std::min(p, ff.p_exponent());
  return p;
}

std::size_t FriedrichsModel::positive_level_count() const {
  return static_cast<std::size_t>(std::count_if(levels_.begin(), levels_.end(), [](double w) { return w > 0.0; }));
}

FriedrichsModel FriedrichsModel::with_lambda(double lambda) const {
  return FriedrichsModel(levels_, lambda, form_factors_, units_);
}

FriedrichsModel FriedrichsModel::with_scaled_form_factors(double s) const {
  std::vector<FormFactor> scaled;
  scaled.reserve(form_factors_.size());
  for (const auto& ff : form_factors_) scaled.push_back(ff.scaled(s));
  return FriedrichsModel(levels_, lambda_, std::move(scaled), units_);
}

// ---------------------------------------------------------------------------

cplx eval_form_factor(const FriedrichsModel& model, std::size_t n, double omega) {
  return model.form_factor(n).value(omega);
}

double eval_mod_sq_derivative(const FriedrichsModel& model, std::size_t n, double omega) {
  return model.form_factor(n).mod_sq_derivative(omega);
}

double l2_norm_sq(const FriedrichsModel& model, std::size_t n, const QuadratureSettings& settings) {
  const auto& ff = model.form_factor(n);
  const double scale = ff.cutoff();
  auto breaks = ff.kinks();
  breaks.insert(breaks.end(), {0.1 * scale, scale, 3.0 * scale});
  return integrate_semiinf([&ff](double w) { return ff.mod_sq(w); }, settings, scale, breaks, 10.0 * scale).value;
}

double total_l2_norm_sq(const FriedrichsModel& model, const QuadratureSettings& settings) {
  double total = 0.0;
  for (std::size_t n = 0; n < model.size(); ++n) total += l2_norm_sq(model, n, settings);
  return total;
}

}  // namespace friedrichs
