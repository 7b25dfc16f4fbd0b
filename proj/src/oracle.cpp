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

#include "friedrichs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "friedrichs/errors.hpp"
#include "friedrichs/solver.hpp"

namespace friedrichs::oracle {

namespace {

constexpr std::size_t kPanelOrder = 16;

void append_panel(ContinuumGrid& g, double a, double b, std::size_t order) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < order; ++i) {
    g.nodes.push_back(mid + half * x[i]);
    g.weights.push_back(half * w[i]);
  }
}

// w = start + scale * t/(1 - t) for t in [a, b] subset of [0, 1).
void append_tail_panel(ContinuumGrid& g, double start, double scale, double a, double b, std::size_t order) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < order; ++i) {
    const double t = mid + half * x[i];
    const double one_minus = 1.0 - t;
    g.nodes.push_back(start + scale * t / one_minus);
    g.weights.push_back(half * w[i] * scale / (one_minus * one_minus));
  }
}

// Real symmetric (or complex Hermitian) column-major copy of the matrix.
// When every level has a constant phase the coupling is made real by
// rephasing the level basis; `phases` then holds conj(phase_n).
struct DenseForm {
  bool real = true;
  std::vector<double> re;
  std::vector<lapack_complex_double> cx;
  Eigen::VectorXcd level_phase;
};

DenseForm dense_form(const DiscretizedHamiltonian& h) {
  const auto n_lv = h.level_count();
  const auto dim = h.dimension();
  DenseForm out;
  out.level_phase = Eigen::VectorXcd::Ones(n_lv);
  for (Eigen::Index i = 0; i < n_lv && out.real; ++i) {
    // Phase of the first non-negligible coupling fixes the row phase.
    cplx phase = 1.0;
    for (Eigen::Index j = 0; j < h.coupling.cols(); ++j) {
      if (std::abs(h.coupling(i, j)) > 0.0) {
        phase = h.coupling(i, j) / std::abs(h.coupling(i, j));
        break;
      }
    }
    for (Eigen::Index j = 0; j < h.coupling.cols(); ++j) {
      const cplx z = std::conj(phase) * h.coupling(i, j);
      if (std::abs(z.imag()) > 1e-14 * std::abs(z)) {
        out.real = false;
        break;
      }
    }
    out.level_phase(i) = phase;
  }
  const auto idx = [dim](Eigen::Index r, Eigen::Index c) { return static_cast<std::size_t>(c * dim + r); };
  if (out.real) {
    out.re.assign(static_cast<std::size_t>(dim * dim), 0.0);
    for (Eigen::Index i = 0; i < n_lv; ++i) out.re[idx(i, i)] = h.levels(i);
    for (Eigen::Index j = 0; j < h.nodes.size(); ++j) out.re[idx(n_lv + j, n_lv + j)] = h.nodes(j);
    for (Eigen::Index i = 0; i < n_lv; ++i)
      for (Eigen::Index j = 0; j < h.coupling.cols(); ++j) {
        const double v = (std::conj(out.level_phase(i)) * h.coupling(i, j)).real();
        out.re[idx(i, n_lv + j)] = v;
        out.re[idx(n_lv + j, i)] = v;
      }
  } else {
    out.level_phase = Eigen::VectorXcd::Ones(n_lv);
    const Eigen::MatrixXcd d = h.dense();
    out.cx.resize(static_cast<std::size_t>(dim * dim));
    for (Eigen::Index c = 0; c < dim; ++c)
      for (Eigen::Index r = 0; r < dim; ++r) out.cx[idx(r, c)] = d(r, c);
  }
  return out;
}

double gershgorin_lower(const DiscretizedHamiltonian& h) {
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < h.level_count(); ++i) lo = std::min(lo, h.levels(i) - h.coupling.row(i).cwiseAbs().sum());
  for (Eigen::Index j = 0; j < h.nodes.size(); ++j) lo = std::min(lo, h.nodes(j) - h.coupling.col(j).cwiseAbs().sum());
  return lo - 1.0;
}

}  // namespace

void gauss_legendre(std::size_t order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order == 0) throw DomainError("Gauss-Legendre order must be positive");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const auto n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) nodes[order / 2] = 0.0;
}

ContinuumGrid continuum_grid(const FriedrichsModel& model, std::size_t m, double omega_max) {
  if (m < 10) throw DomainError("continuum grid needs at least 10 nodes");
  const double scale = model.max_cutoff();
  if (!(omega_max > 0.0)) throw DomainError("omega_max must be positive");
  ContinuumGrid g;
  if (m < 3 * kPanelOrder) {
    append_tail_panel(g, 0.0, scale, 0.0, 1.0, m);
    return g;
  }
  std::size_t panels = m / kPanelOrder;
  std::size_t extra = m - panels * kPanelOrder;  // spread over the first panels
  const std::size_t tail_panels = std::max<std::size_t>(1, panels / 5);
  const std::size_t geo_panels = panels - tail_panels - 1;
  const double w_lo = 1e-8 * scale;

  std::vector<double> edges(geo_panels + 1);
  const double ratio = std::pow(omega_max / w_lo, 1.0 / static_cast<double>(geo_panels));
  for (std::size_t k = 0; k <= geo_panels; ++k) edges[k] = w_lo * std::pow(ratio, static_cast<double>(k));
  edges.back() = omega_max;
  for (double w : model.levels()) {
    if (!(w > w_lo && w < omega_max)) continue;
    auto it = std::min_element(edges.begin() + 1, edges.end() - 1,
                               [w](double a, double b) { return std::abs(std::log(a / w)) < std::abs(std::log(b / w)); });
    if (it != edges.end() - 1) *it = w;
  }
  std::sort(edges.begin(), edges.end());

  const auto take_order = [&extra]() {
    if (extra == 0) return kPanelOrder;
    --extra;
    return kPanelOrder + 1;
  };
  append_panel(g, 0.0, w_lo, take_order());
  for (std::size_t k = 0; k < geo_panels; ++k) append_panel(g, edges[k], edges[k + 1], take_order());
  for (std::size_t k = 0; k < tail_panels; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(tail_panels);
    const double b = static_cast<double>(k + 1) / static_cast<double>(tail_panels);
    append_tail_panel(g, omega_max, scale, a, b, take_order());
  }
  return g;
}

Eigen::MatrixXcd DiscretizedHamiltonian::dense() const {
  const auto n = level_count();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dimension(), dimension());
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = levels(i);
  for (Eigen::Index j = 0; j < nodes.size(); ++j) h(n + j, n + j) = nodes(j);
  h.topRightCorner(n, nodes.size()) = coupling;
  h.bottomLeftCorner(nodes.size(), n) = coupling.adjoint();
  return h;
}

DiscretizedHamiltonian discretize(const FriedrichsModel& model, std::size_t m, double omega_max) {
  if (!(omega_max > 0.0)) {
    double top = 100.0 * model.max_cutoff();
    for (double w : model.levels()) top = std::max(top, 10.0 * std::abs(w));
    omega_max = top;
  }
  return discretize(model, continuum_grid(model, m, omega_max));
}

DiscretizedHamiltonian discretize(const FriedrichsModel& model, const ContinuumGrid& grid) {
  if (grid.nodes.size() != grid.weights.size()) throw DomainError("grid nodes and weights differ in length");
  const auto n = static_cast<Eigen::Index>(model.size());
  const auto m = static_cast<Eigen::Index>(grid.nodes.size());
  DiscretizedHamiltonian h;
  h.levels = Eigen::Map<const Eigen::VectorXd>(model.levels().data(), n);
  h.nodes = Eigen::Map<const Eigen::VectorXd>(grid.nodes.data(), m);
  h.weights = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(), m);
  h.coupling.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ff = model.form_factor(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < m; ++j)
      h.coupling(i, j) = model.lambda() * std::conj(ff.value(h.nodes(j))) * std::sqrt(h.weights(j));
  }
  return h;
}

SubThresholdSpectrum negative_spectrum(const DiscretizedHamiltonian& h, double gap_tol) {
  const auto dim = static_cast<lapack_int>(h.dimension());
  const auto n_lv = h.level_count();
  // Cauchy interlacing: at most N eigenvalues lie below the smallest node.
  const lapack_int cap = static_cast<lapack_int>(n_lv) + 1;
  const double vl = gershgorin_lower(h);
  const double vu = -gap_tol;
  SubThresholdSpectrum out;
  if (!(vl < vu)) {
    out.level_components.resize(n_lv, 0);
    return out;
  }
  auto dense = dense_form(h);
  lapack_int found = 0;
  std::vector<double> w(static_cast<std::size_t>(dim));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(cap));
  lapack_int info = 0;
  std::vector<double> z_re;
  std::vector<lapack_complex_double> z_cx;
  if (dense.real) {
    z_re.resize(static_cast<std::size_t>(dim) * static_cast<std::size_t>(cap));
    info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'U', dim, dense.re.data(), dim, vl, vu, 0, 0, 0.0, &found,
                          w.data(), z_re.data(), dim, support.data());
  } else {
    z_cx.resize(static_cast<std::size_t>(dim) * static_cast<std::size_t>(cap));
    info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'V', 'U', dim, dense.cx.data(), dim, vl, vu, 0, 0, 0.0, &found,
                          w.data(), z_cx.data(), dim, support.data());
  }
  if (info != 0) throw ConvergenceError("dense eigensolver failed (info " + std::to_string(info) + ")");
  out.energies.assign(w.begin(), w.begin() + found);
  out.level_components.resize(n_lv, found);
  for (lapack_int k = 0; k < found; ++k) {
    for (Eigen::Index i = 0; i < n_lv; ++i) {
      const auto at = static_cast<std::size_t>(k) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
      cplx comp = dense.real ? cplx(z_re[at], 0.0) : z_cx[at];
      out.level_components(i, k) = dense.level_phase(i) * comp;
    }
  }
  return out;
}

Eigen::VectorXd all_eigenvalues(const DiscretizedHamiltonian& h) {
  const auto dim = static_cast<lapack_int>(h.dimension());
  auto dense = dense_form(h);
  Eigen::VectorXd w(dim);
  lapack_int info = 0;
  if (dense.real) info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'U', dim, dense.re.data(), dim, w.data());
  else info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'U', dim, dense.cx.data(), dim, w.data());
  if (info != 0) throw ConvergenceError("dense eigensolver failed (info " + std::to_string(info) + ")");
  return w;
}

ConvergenceTable compare_negative_spectrum(const FriedrichsModel& model, std::span<const std::size_t> schedule,
                                           const Numerics& numerics, double omega_max, double gap_tol) {
  const auto report = solve(model, numerics);
  ConvergenceTable table;
  table.expected_count = report.count;
  for (const auto& st : report.states) table.solver_energies.push_back(st.energy);

  for (std::size_t m : schedule) {
    const auto spec = negative_spectrum(discretize(model, m, omega_max), gap_tol);
    ConvergenceRow row;
    row.m = m;
    row.count = static_cast<int>(spec.energies.size());
    row.energies = spec.energies;
    if (row.count == table.expected_count) {
      for (int k = 0; k < row.count; ++k) {
        const auto ki = static_cast<std::size_t>(k);
        row.abs_errors.push_back(std::abs(spec.energies[ki] - table.solver_energies[ki]));
        const Eigen::VectorXcd a = spec.level_components.col(k);
        const Eigen::VectorXcd& b = report.states[ki].c;
        const double denom = a.squaredNorm() * b.squaredNorm();
        row.fidelities.push_back(denom > 0.0 ? std::norm(a.dot(b)) / denom : 0.0);
      }
    }
    table.rows.push_back(std::move(row));
  }

  if (!table.rows.empty()) {
    const auto& last = table.rows.back();
    bool ok = last.count == table.expected_count;
    if (ok && table.rows.size() >= 2) {
      const auto& prev = table.rows[table.rows.size() - 2];
      if (prev.count != last.count) ok = false;
      for (std::size_t k = 0; ok && k < last.energies.size(); ++k) {
        const double step = std::abs(last.energies[k] - prev.energies[k]);
        if (step > 1e-6 * std::max(1.0, std::abs(last.energies[k]))) ok = false;
      }
    }
    table.converged = ok;
  }
  return table;
}

}  // namespace friedrichs::oracle
