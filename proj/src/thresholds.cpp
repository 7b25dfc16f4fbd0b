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

#include "friedrichs/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "friedrichs/errors.hpp"
#include "friedrichs/quad.hpp"

namespace friedrichs {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kAlphaTol = 1e-300;

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  g.back() = hi;
  return g;
}

// Maximizes f on [a, b]; returns (argmax, max). Works in whatever coordinate
// the caller passes.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// Grid maximum of f, then golden refinement between the neighbours of the
// best node (in the coordinate u = map(x)).
std::pair<double, double> grid_then_refine(const std::function<double(double)>& f, const std::vector<double>& grid,
                                           double tol, bool logarithmic) {
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (!(hi > lo) || (logarithmic && !(lo > 0.0))) return {grid[best], best_val};
  std::pair<double, double> refined;
  if (logarithmic) {
    refined = golden_max([&f](double u) { return f(std::exp(u)); }, std::log(lo), std::log(hi), tol);
    refined.first = std::exp(refined.first);
  } else {
    refined = golden_max(f, lo, hi, tol * std::max(std::abs(hi), 1e-300));
  }
  if (refined.second > best_val) return refined;
  return {grid[best], best_val};
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return "true";
    case Verdict::NotCertified:
      return "false";
    default:
      return "inapplicable";
  }
}

SupNorm sup_d_norm(const FriedrichsModel& model, const Numerics& numerics, const SupSearch& search) {
  const double c = model.max_cutoff();
  SupNorm out;
  out.grid_min = search.min_factor * c;
  out.grid_max = search.max_factor * c;
  const auto grid = log_grid(out.grid_min, out.grid_max, search.log_points);
  const auto norm_at = [&](double e) { return pv_matrix(model, e, numerics).norm(); };
  const auto [arg, val] = grid_then_refine(norm_at, grid, search.rel_tol, true);
  out.value = val;
  out.argmax = arg;
  out.tail_value = norm_at(out.grid_max);
  return out;
}

double r_a(const FriedrichsModel& model) {
  const auto& w = model.levels();
  const std::size_t n_plus = model.positive_level_count();
  if (n_plus == 0) throw DomainError("R_a needs at least one positive level");
  double r = w[w.size() - n_plus] / 3.0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double gap = w[i] - w[i - 1];
    if (gap == 0.0) throw DegeneracyError("R_a needs nondegenerate levels");
    r = std::min(r, gap / 3.0);
  }
  return r;
}

double coupling_threshold(double radius, const SupNorm& sup) {
  if (!(sup.value > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(radius / sup.value);
}

double lambda_a(const FriedrichsModel& model, const SupNorm& sup) { return coupling_threshold(r_a(model), sup); }

RbResult r_b_lambda_b(const FriedrichsModel& model, const SupNorm& sup, const Numerics& numerics,
                      const SupSearch& search) {
  const double c = model.max_cutoff();
  const double psd_tol = 1e-10 * sup.value;
  const auto grid = log_grid(search.min_factor * c, search.max_factor * c, search.log_points);
  const auto smallest = [&](double e) { return pv_matrix(model, e, numerics).eigenvalues()(0); };

  RbResult out;
  std::size_t first_bad = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (smallest(grid[i]) < -psd_tol) {
      first_bad = i;
      break;
    }
  }
  if (first_bad == grid.size()) {
    out.r_b = grid.back();
    out.diagnostic = "D(E) stays positive semidefinite over the whole search range";
  } else if (first_bad == 0) {
    out.r_b = 0.0;
    out.diagnostic = "D(E) is indefinite at the smallest searched energy";
  } else {
    double good = std::log(grid[first_bad - 1]);
    double bad = std::log(grid[first_bad]);
    while (bad - good > search.rel_tol) {
      const double mid = 0.5 * (good + bad);
      if (smallest(std::exp(mid)) < -psd_tol) bad = mid;
      else good = mid;
    }
    out.r_b = std::exp(good);
  }
  out.lambda_b = coupling_threshold(out.r_b, sup);
  return out;
}

double level_gap_third(const FriedrichsModel& model, std::size_t n) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < model.size(); ++m)
    if (m != n) gap = std::min(gap, std::abs(model.level(n) - model.level(m)));
  if (gap == 0.0) throw DegeneracyError("level is degenerate");
  return gap / 3.0;
}

double lambda_n(const FriedrichsModel& model, std::size_t n, const SupNorm& sup) {
  return coupling_threshold(level_gap_third(model, n), sup);
}

LevelConstants alpha_beta_gamma(const FriedrichsModel& model, std::size_t n, double r_a_value) {
  const double wn = model.level(n);
  if (!(wn > 0.0)) throw DomainError("alpha/beta/gamma are defined for positive levels only");
  const auto& vn = model.form_factor(n);
  LevelConstants out;
  out.alpha = vn.mod_sq(wn);

  // sup_{w>0} |d|v_n|^2/dw|: the closed form is finite at w = 0.
  const double c = vn.cutoff();
  const auto abs_deriv = [&vn](double w) { return std::abs(vn.mod_sq_derivative(w)); };
  auto grid = log_grid(1e-10 * c, 1e4 * c, 10000);
  auto [arg, val] = grid_then_refine(abs_deriv, grid, 1e-10, true);
  if (const double at0 = abs_deriv(0.0); at0 >= val) {
    arg = 0.0;
    val = at0;
  }
  out.mod_sq_derivative_sup = val;
  out.mod_sq_derivative_argmax = arg;
  const double gap3 = level_gap_third(model, n);
  out.beta = std::isinf(gap3) ? std::numeric_limits<double>::infinity() : gap3 * val;

  const double lo = std::max(0.0, wn - r_a_value);
  const double hi = wn + r_a_value;
  std::vector<double> window(2001);
  for (std::size_t k = 0; k < window.size(); ++k)
    window[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(window.size() - 1);
  for (const auto& vi : model.form_factors()) {
    const auto sq = [&vi](double w) { return vi.mod_sq(w); };
    out.gamma += grid_then_refine(sq, window, 1e-10, false).second;
  }
  return out;
}

double lambda_bar(double lambda_n_value, double alpha, double beta, double gamma) {
  if (!(alpha > kAlphaTol)) throw DomainError("lambda_bar needs v_n(w_n) != 0");
  if (!(beta > 0.0)) throw DomainError("lambda_bar needs beta > 0");
  if (gamma < 0.0) throw DomainError("lambda_bar needs gamma >= 0");
  const double s = alpha + beta + gamma;
  const double disc = std::max(0.0, s * s - 4.0 * alpha * beta);
  // s - sqrt(disc) = 4 alpha beta / (s + sqrt(disc)), free of cancellation.
  return lambda_n_value * std::sqrt(2.0 * alpha / (s + std::sqrt(disc)));
}

ThresholdReport verdict(const FriedrichsModel& model, const Numerics& numerics, const SupSearch& search) {
  if (!(model.min_p_exponent() > 0.0)) {
    ThresholdReport r;
    r.lambda = std::abs(model.lambda());
    r.diagnostics.push_back("every form factor must vanish as w^p with p > 0 at threshold");
    return r;
  }
  return verdict(model, sup_d_norm(model, numerics, search), numerics, search);
}

ThresholdReport verdict(const FriedrichsModel& model, const SupNorm& sup, const Numerics& numerics,
                        const SupSearch& search) {
  ThresholdReport rep;
  rep.lambda = std::abs(model.lambda());
  rep.sup_d = sup;
  rep.n_plus = model.positive_level_count();
  const auto inapplicable = [&rep](std::string why) {
    rep.verdict = Verdict::Inapplicable;
    rep.diagnostics.push_back(std::move(why));
    return rep;
  };
  if (!(model.min_p_exponent() > 0.0)) return inapplicable("every form factor must vanish as w^p with p > 0");
  if (rep.n_plus == 0) return inapplicable("no positive level: nothing embedded in the continuum to certify");
  for (std::size_t i = 1; i < model.size(); ++i)
    if (model.level(i) == model.level(i - 1)) return inapplicable("degenerate levels");

  rep.r_a = r_a(model);
  rep.lambda_a = coupling_threshold(rep.r_a, sup);
  const auto rb = r_b_lambda_b(model, sup, numerics, search);
  rep.r_b = rb.r_b;
  rep.lambda_b = rb.lambda_b;
  if (!rb.diagnostic.empty()) rep.diagnostics.push_back("R_b: " + rb.diagnostic);

  rep.bound = std::min(rep.lambda_a, rep.lambda_b);
  rep.binding = rep.lambda_a <= rep.lambda_b ? "lambda_a" : "lambda_b";
  rep.bound_without_lambda_b = rep.lambda_a;
  for (std::size_t n = model.size() - rep.n_plus; n < model.size(); ++n) {
    LevelThreshold lt;
    lt.level = n;
    lt.lambda_n = lambda_n(model, n, sup);
    lt.constants = alpha_beta_gamma(model, n, rep.r_a);
    if (!(lt.constants.alpha > kAlphaTol)) {
      std::ostringstream msg;
      msg << "v_n(w_n) vanishes for level " << n + 1 << "; the certificate does not cover this case";
      return inapplicable(msg.str());
    }
    if (std::isinf(lt.lambda_n)) {
      // Single level: the projector is trivial and only the alpha > beta-term
      // condition remains, i.e. lambda^2 sup||D|| sup|d|v|^2/dw| < alpha.
      lt.lambda_bar = std::sqrt(lt.constants.alpha / (sup.value * lt.constants.mod_sq_derivative_sup));
    } else {
      lt.lambda_bar = lambda_bar(lt.lambda_n, lt.constants.alpha, lt.constants.beta, lt.constants.gamma);
    }
    if (lt.lambda_bar < rep.bound) {
      rep.bound = lt.lambda_bar;
      rep.binding = "lambda_bar_" + std::to_string(n + 1);
    }
    rep.bound_without_lambda_b = std::min(rep.bound_without_lambda_b, lt.lambda_bar);
    rep.levels.push_back(lt);
  }
  rep.verdict = rep.lambda < rep.bound ? Verdict::Certified : Verdict::NotCertified;
  return rep;
}

}  // namespace friedrichs
