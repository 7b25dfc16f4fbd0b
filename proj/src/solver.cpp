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

#include "friedrichs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "friedrichs/errors.hpp"

namespace friedrichs {

namespace {

constexpr int kMaxBisection = 200;
constexpr int kMaxBracketDoublings = 200;

double branch_gap(const FriedrichsModel& model, std::size_t n, double energy, const Numerics& numerics) {
  return kappa_at(model, energy, numerics).kappa(static_cast<Eigen::Index>(n)) - energy;
}

std::vector<double> state_breakpoints(const FriedrichsModel& model, double energy) {
  std::vector<double> b = model.kinks();
  b.insert(b.end(), {std::abs(energy), 10.0 * std::abs(energy)});
  for (const auto& ff : model.form_factors()) b.insert(b.end(), {0.1 * ff.cutoff(), ff.cutoff(), 3.0 * ff.cutoff()});
  return b;
}

}  // namespace

NegativeCount count_negative(const FriedrichsModel& model, const Numerics& numerics, double tol_zero) {
  const auto point = kappa_at(model, 0.0, numerics);
  NegativeCount out;
  out.kappa_at_zero = point.kappa;
  for (Eigen::Index i = 0; i < point.kappa.size(); ++i) {
    if (point.kappa(i) < -tol_zero) ++out.count;
    else if (std::abs(point.kappa(i)) <= tol_zero) out.indeterminate.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

RootResult find_root(const FriedrichsModel& model, std::size_t n, const Numerics& numerics) {
  if (n >= model.size()) throw DomainError("branch index out of range");
  double hi = 0.0;
  const double g_hi = branch_gap(model, n, hi, numerics);
  if (!(g_hi < 0.0)) throw DomainError("branch has kappa_n(0) >= 0, no root below the continuum");

  // Any root obeys E >= min(w_1, 0) - |lambda| * sqrt(sum ||v_n||^2).
  const double l2 = total_l2_norm_sq(model, numerics.quad);
  const double floor = std::min(model.level(0), 0.0);
  double lo = floor - std::abs(model.lambda()) * std::sqrt(l2) - 1e-6 * std::max(1.0, std::abs(floor));
  int doublings = 0;
  while (branch_gap(model, n, lo, numerics) <= 0.0) {
    hi = lo;
    lo *= 2.0;
    if (++doublings > kMaxBracketDoublings || !std::isfinite(lo))
      throw ConvergenceError("could not bracket the bound-state energy; quadrature is likely unreliable");
  }

  RootResult out;
  double mid = 0.5 * (lo + hi);
  double g_mid = 0.0;
  for (out.iterations = 0; out.iterations < kMaxBisection; ++out.iterations) {
    mid = 0.5 * (lo + hi);
    g_mid = branch_gap(model, n, mid, numerics);
    if (g_mid > 0.0) lo = mid;
    else hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(mid))) break;
  }
  out.energy = 0.5 * (lo + hi);
  out.residual = branch_gap(model, n, out.energy, numerics);
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  return out;
}

cplx BoundState::continuum_amplitude(const FriedrichsModel& model, double omega) const {
  cplx sum = 0.0;
  for (std::size_t m = 0; m < model.size(); ++m) sum += c(static_cast<Eigen::Index>(m)) * model.form_factor(m).value(omega);
  return -model.lambda() * sum / (omega - energy);
}

BoundState bound_state(const FriedrichsModel& model, std::size_t n, double energy, const Numerics& numerics) {
  if (!(energy < 0.0)) throw DomainError("bound_state needs E < 0");
  const auto point = kappa_at(model, energy, numerics);
  const auto idx = static_cast<Eigen::Index>(n);
  if (idx >= point.kappa.size()) throw DomainError("branch index out of range");

  BoundState st;
  st.branch = n;
  st.energy = energy;
  st.c = point.vectors.col(idx);

  const double tol = 1e-10 * std::max(1.0, point.norm());
  std::vector<Eigen::Index> cluster;
  for (Eigen::Index i = 0; i < point.kappa.size(); ++i)
    if (std::abs(point.kappa(i) - point.kappa(idx)) <= tol) cluster.push_back(i);
  if (cluster.size() > 1) {
    st.degenerate = true;
    st.degenerate_subspace.resize(point.vectors.rows(), static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t k = 0; k < cluster.size(); ++k)
      st.degenerate_subspace.col(static_cast<Eigen::Index>(k)) = point.vectors.col(cluster[k]);
  }

  const double scale = model.max_cutoff();
  const auto breaks = state_breakpoints(model, energy);
  const double split = std::max(10.0 * scale, 20.0 * std::abs(energy));
  const Eigen::VectorXcd c0 = st.c;
  const auto combined = [&model, &c0](double w) {
    cplx sum = 0.0;
    for (std::size_t m = 0; m < model.size(); ++m) sum += c0(static_cast<Eigen::Index>(m)) * model.form_factor(m).value(w);
    return sum;
  };
  const double cont = model.lambda_sq() *
                      integrate_semiinf(
                          [&](double w) {
                            const double d = w - energy;
                            return std::norm(combined(w)) / (d * d);
                          },
                          numerics.quad, scale, breaks, split)
                          .value;
  const double total = c0.squaredNorm() + cont;
  st.c = c0 / std::sqrt(total);
  st.continuum_norm_sq = cont / total;
  st.total_norm_sq = st.c.squaredNorm() + st.continuum_norm_sq;

  // (w_n - E) c_n - lambda^2 \int v_n^* (sum_m c_m v_m) / (w - E) dw, per row.
  const double norm_factor = 1.0 / std::sqrt(total);
  st.row_residuals.resize(static_cast<Eigen::Index>(model.size()));
  for (std::size_t r = 0; r < model.size(); ++r) {
    const auto& vr = model.form_factor(r);
    const auto overlap = [&](double w) { return std::conj(vr.value(w)) * combined(w) / (w - energy); };
    const double re = integrate_semiinf([&](double w) { return overlap(w).real(); }, numerics.quad, scale, breaks, split).value;
    const double im = integrate_semiinf([&](double w) { return overlap(w).imag(); }, numerics.quad, scale, breaks, split).value;
    const auto ri = static_cast<Eigen::Index>(r);
    const cplx row = (model.level(r) - energy) * st.c(ri) - model.lambda_sq() * norm_factor * cplx(re, im);
    st.row_residuals(ri) = std::abs(row);
  }
  return st;
}

SolveReport solve(const FriedrichsModel& model, const Numerics& numerics) {
  const auto counted = count_negative(model, numerics);
  SolveReport out;
  out.count = counted.count;
  out.kappa_at_zero = counted.kappa_at_zero;
  for (int n = 0; n < counted.count; ++n) {
    const auto root = find_root(model, static_cast<std::size_t>(n), numerics);
    out.roots.push_back(root);
    out.states.push_back(bound_state(model, static_cast<std::size_t>(n), root.energy, numerics));
  }
  return out;
}

IndependenceReport independence_analysis(const FriedrichsModel& model, double reference_energy,
                                         const Numerics& numerics, double rank_tol) {
  if (!(reference_energy < 0.0)) throw DomainError("independence analysis needs E_ref < 0");
  IndependenceReport out;
  out.sigma = gram_matrix(model, reference_energy, numerics).eigenvalues();
  const double top = out.sigma(out.sigma.size() - 1);
  for (Eigen::Index i = 0; i < out.sigma.size(); ++i)
    if (out.sigma(i) > rank_tol * top) ++out.n_independent;
  return out;
}

std::vector<PositiveCandidate> positive_candidate_scan(const FriedrichsModel& model, std::span<const double> energies,
                                                       const Numerics& numerics, double defect_tol) {
  for (double e : energies)
    if (!(e > 0.0)) throw DomainError("positive_candidate_scan needs a positive grid");
  if (!std::is_sorted(energies.begin(), energies.end())) throw DomainError("scan grid must be sorted");
  std::vector<PositiveCandidate> out;
  if (energies.size() < 2) return out;

  const auto curve = kappa_curve(model, energies, numerics);
  const auto dim = static_cast<std::size_t>(model.size());
  for (std::size_t n = 0; n < dim; ++n) {
    const auto ni = static_cast<Eigen::Index>(n);
    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
      const double g0 = curve[k].kappa(ni) - curve[k].energy;
      const double g1 = curve[k + 1].kappa(ni) - curve[k + 1].energy;
      if (!((g0 > 0.0 && g1 <= 0.0) || (g0 < 0.0 && g1 >= 0.0))) continue;
      double lo = curve[k].energy;
      double hi = curve[k + 1].energy;
      const bool rising = g0 < 0.0;
      for (int it = 0; it < kMaxBisection && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = branch_gap(model, n, mid, numerics);
        if ((g > 0.0) != rising) lo = mid;
        else hi = mid;
      }
      PositiveCandidate cand;
      cand.branch = n;
      cand.energy = 0.5 * (lo + hi);
      const auto point = kappa_at(model, cand.energy, numerics);
      cplx sum = 0.0;
      for (std::size_t i = 0; i < dim; ++i)
        sum += point.vectors(static_cast<Eigen::Index>(i), ni) * model.form_factor(i).value(cand.energy);
      cand.zero_defect = std::abs(sum);
      cand.below_tolerance = cand.zero_defect < defect_tol;
      out.push_back(cand);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.energy < b.energy; });
  return out;
}

}  // namespace friedrichs
