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

// Reference computations for the test suite. Nothing here calls into the
// library's quadrature or eigen-solvers.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace testing_oracles {

using cplx = std::complex<double>;

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Golub-Welsch: Legendre nodes on [-1, 1] from the Jacobi matrix.
inline Rule golub_welsch(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Rule r;
  for (int k = 0; k < n; ++k) {
    r.x.push_back(es.eigenvalues()(k));
    r.w.push_back(2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
  }
  return r;
}

inline double composite(const std::function<double(double)>& f, double a, double b, int panels,
                        const Rule& rule) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t k = 0; k < rule.x.size(); ++k) sum += rule.w[k] * f(mid + 0.5 * h * rule.x[k]);
  }
  return 0.5 * h * sum;
}

// Integral over [0, inf) of f(w) with w = u^2 and u = s/(1-s), so the w^{1/2}
// threshold and the algebraic tail both become smooth in s. About 1e6 nodes
// with the defaults.
inline double semiinf(const std::function<double(double)>& f, int panels = 50000, int order = 20) {
  static const Rule rule = golub_welsch(order);
  const auto g = [&f](double s) {
    if (s >= 1.0) return 0.0;
    const double u = s / (1.0 - s);
    const double du = 1.0 / ((1.0 - s) * (1.0 - s));
    return f(u * u) * 2.0 * u * du;
  };
  return composite(g, 0.0, 1.0, panels, rule);
}

// Same over a finite interval [a, b] with a >= 0, using w = u^2.
inline double finite_sqrt(const std::function<double(double)>& f, double a, double b, int panels = 4000,
                          int order = 20) {
  static const Rule rule = golub_welsch(order);
  return composite([&f](double u) { return f(u * u) * 2.0 * u; }, std::sqrt(a), std::sqrt(b), panels, rule);
}

// Integral over [start, inf) with w = start + s/(1-s).
inline double tail(const std::function<double(double)>& f, double start, int panels = 20000, int order = 20) {
  static const Rule rule = golub_welsch(order);
  const auto g = [&f, start](double s) {
    if (s >= 1.0) return 0.0;
    const double one = 1.0 - s;
    return f(start + s / one) / (one * one);
  };
  return composite(g, 0.0, 1.0, panels, rule);
}

// Principal value of int_0^inf eta(w)/(w-E) dw by symmetric subtraction on
// [0, 2E]; the subtracted constant integrates to zero there.
inline double principal_value(const std::function<double(double)>& eta, double e) {
  const double eta_e = eta(e);
  const auto near = [&](double w) {
    const double d = w - e;
    if (std::abs(d) < 1e-9 * std::max(e, 1.0)) {
      const double h = 1e-5 * std::max(e, 1e-3);
      return (eta(e + h) - eta(e - h)) / (2.0 * h);
    }
    return (eta(w) - eta_e) / d;
  };
  static const Rule rule = golub_welsch(20);
  // Split at E so both panels see a smooth integrand.
  const double left = finite_sqrt(near, 0.0, e, 2000);
  const double right = composite(near, e, 2.0 * e, 2000, rule);
  const double far = tail([&](double w) { return eta(w) / (w - e); }, 2.0 * e);
  return left + right + far;
}

// Closed forms written out directly from the published expressions.
inline double rational_form_factor(int n, double a, double cutoff, double w) {
  const double x = w / cutoff;
  return std::sqrt(cutoff) * std::sqrt(x) * (1.0 + a * std::pow(x, 2 * (n - 1))) / std::pow(1.0 + x * x, 1 + n);
}

inline cplx hydrogen_form_factor(int index, double w, double lambda1 = 1.0) {
  const cplx i{0.0, 1.0};
  const double amp = std::sqrt(lambda1);
  if (index == 1) {
    const double x = w / lambda1;
    return std::conj(i * amp * std::sqrt(x) / std::pow(1.0 + x * x, 2));
  }
  if (index == 2) {
    const double x = w / (8.0 / 9.0 * lambda1);
    return std::conj(i * 81.0 * amp * std::sqrt(x) * (1.0 + 2.0 * x * x) /
                     (128.0 * std::sqrt(2.0) * std::pow(1.0 + x * x, 3)));
  }
  const double x = w / (10.0 / 12.0 * lambda1);
  return std::conj(i * 54.0 * std::sqrt(3.0) * amp * std::sqrt(x) * (45.0 + 146.0 * x * x + 125.0 * std::pow(x, 4)) /
                   (15625.0 * std::pow(1.0 + x * x, 4)));
}

// Roots of sum_k c[k] x^k via the companion matrix, sorted by real part.
inline std::vector<double> real_poly_roots(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
  for (int k = 0; k < n; ++k) comp(k, n - 1) = -c[k] / c[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(es.eigenvalues()(k).real());
  std::sort(out.begin(), out.end());
  return out;
}

// Characteristic polynomial coefficients of a small Hermitian matrix by
// Faddeev-LeVerrier, ascending powers, real parts only.
inline std::vector<double> char_poly(const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * Eigen::MatrixXcd::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  std::vector<double> out;
  for (auto v : c) out.push_back(v.real());
  return out;
}

}  // namespace testing_oracles
