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

#include "friedrichs/quad.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "friedrichs/errors.hpp"

namespace friedrichs {

namespace {

void disable_gsl_abort() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

struct Trampoline {
  const RealIntegrand* f;
  int count = 0;
  static double call(double x, void* params) {
    auto* self = static_cast<Trampoline*>(params);
    ++self->count;
    return (*self->f)(x);
  }
};

// Collect sorted unique panel boundaries inside (lo, hi), with lo and hi.
std::vector<double> panel_points(double lo, double hi, std::span<const double> breakpoints) {
  std::vector<double> pts{lo, hi};
  for (double b : breakpoints)
    if (b > lo && b < hi) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); }),
            pts.end());
  return pts;
}

QuadResult integrate_tail(const RealIntegrand& f, double start, double scale, const QuadratureSettings& settings) {
  const RealIntegrand mapped = [&f, start, scale](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double w = start + scale * t / one_minus;
    if (!std::isfinite(w)) return 0.0;
    return f(w) * scale / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, settings);
}

QuadResult integrate_panels(const RealIntegrand& f, const std::vector<double>& pts, bool with_tail, double scale,
                            const QuadratureSettings& settings) {
  QuadResult total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto piece = integrate(f, pts[i], pts[i + 1], settings);
    total.value += piece.value;
    total.error += piece.error;
    total.evaluations += piece.evaluations;
  }
  if (with_tail) {
    const auto tail = integrate_tail(f, pts.back(), scale, settings);
    total.value += tail.value;
    total.error += tail.error;
    total.evaluations += tail.evaluations;
  }
  return total;
}

// Scalar profile of one matrix entry: eta(w) = v_n^*(w) v_m(w) is either
// phase * (real profile) or has to be split into real and imaginary parts.
struct EntryProfiles {
  cplx phase{1.0, 0.0};
  RealIntegrand re, d_re;
  RealIntegrand im, d_im;  // empty when eta is phase * real
};

EntryProfiles entry_profiles(const FormFactor& vn, const FormFactor& vm) {
  EntryProfiles out;
  const auto pn = vn.constant_phase();
  const auto pm = vm.constant_phase();
  if (pn && pm) {
    out.phase = std::conj(*pn) * *pm;
    out.re = [&vn, &vm](double w) { return vn.real_profile(w) * vm.real_profile(w); };
    out.d_re = [&vn, &vm](double w) {
      return vn.real_profile_derivative(w) * vm.real_profile(w) + vn.real_profile(w) * vm.real_profile_derivative(w);
    };
    return out;
  }
  out.re = [&vn, &vm](double w) { return (std::conj(vn.value(w)) * vm.value(w)).real(); };
  out.im = [&vn, &vm](double w) { return (std::conj(vn.value(w)) * vm.value(w)).imag(); };
  out.d_re = [&vn, &vm](double w) {
    return (std::conj(vn.derivative(w)) * vm.value(w) + std::conj(vn.value(w)) * vm.derivative(w)).real();
  };
  out.d_im = [&vn, &vm](double w) {
    return (std::conj(vn.derivative(w)) * vm.value(w) + std::conj(vn.value(w)) * vm.derivative(w)).imag();
  };
  return out;
}

std::vector<double> model_breakpoints(const FriedrichsModel& model, double energy) {
  std::vector<double> b = model.kinks();
  for (const auto& ff : model.form_factors()) {
    const double c = ff.cutoff();
    b.insert(b.end(), {0.1 * c, c, 3.0 * c});
  }
  if (energy != 0.0) {
    const double e = std::abs(energy);
    b.insert(b.end(), {e, 10.0 * e});
  }
  return b;
}

// Builds the Hermitian matrix from a scalar kernel that integrates one real
// profile (with its derivative) and returns the value and error.
template <class Kernel>
LevelShiftMatrix assemble(const FriedrichsModel& model, ShiftKind kind, double energy, double energy2,
                          Kernel&& kernel) {
  const auto n = static_cast<Eigen::Index>(model.size());
  LevelShiftMatrix out;
  out.entries = Eigen::MatrixXcd::Zero(n, n);
  out.error = Eigen::MatrixXd::Zero(n, n);
  out.energy = energy;
  out.energy2 = energy2;
  out.kind = kind;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& vi = model.form_factor(static_cast<std::size_t>(i));
      const auto& vj = model.form_factor(static_cast<std::size_t>(j));
      const auto prof = entry_profiles(vi, vj);
      const QuadResult re = kernel(prof.re, prof.d_re);
      cplx value = prof.phase * re.value;
      double err = re.error;
      if (prof.im && i != j) {
        const QuadResult im = kernel(prof.im, prof.d_im);
        value += cplx(0.0, im.value);
        err += im.error;
      }
      if (i == j) value = cplx(value.real(), 0.0);
      out.entries(i, j) = value;
      out.entries(j, i) = std::conj(value);
      out.error(i, j) = out.error(j, i) = err;
    }
  }
  return out;
}

void require_threshold_exponents(const FriedrichsModel& model) {
  if (!(model.min_p_exponent() > 0.0))
    throw DomainError("threshold evaluation needs every form factor to vanish as w^p with p > 0");
}

}  // namespace

QuadResult integrate(const RealIntegrand& f, double a, double b, const QuadratureSettings& settings) {
  settings.validate();
  disable_gsl_abort();
  if (a == b) return {};
  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
      gsl_integration_workspace_alloc(static_cast<std::size_t>(settings.max_subdivisions)));
  Trampoline tr{&f};
  gsl_function fn{&Trampoline::call, &tr};
  double result = 0.0;
  double abserr = 0.0;
  const int status = gsl_integration_qags(&fn, a, b, settings.abs_tol, settings.rel_tol,
                                          static_cast<std::size_t>(settings.max_subdivisions), ws.get(), &result,
                                          &abserr);
  const double target = std::max(settings.abs_tol, settings.rel_tol * std::abs(result));
  // Roundoff-limited results are kept when the estimate is still close to target.
  const bool acceptable = status == GSL_SUCCESS || (status == GSL_EROUND && abserr <= 1e3 * target);
  if (!acceptable || !std::isfinite(result)) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] failed: " << gsl_strerror(status)
        << " (estimate " << result << ", error " << abserr << ")";
    throw QuadratureError(msg.str());
  }
  return {result, abserr, tr.count};
}

QuadResult integrate_semiinf(const RealIntegrand& f, const QuadratureSettings& settings, double scale,
                             std::span<const double> breakpoints, double split_point) {
  if (!(scale > 0.0) || !(split_point > 0.0)) throw DomainError("tail map needs positive scale and split point");
  return integrate_panels(f, panel_points(0.0, split_point, breakpoints), true, scale, settings);
}

double bump(double x, double delta) {
  const double u = x / delta;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double bump_derivative(double x, double delta) {
  const double u = x / delta;
  if (std::abs(u) >= 1.0) return 0.0;
  const double s = 1.0 - u * u;
  return bump(x, delta) * (-2.0 * u / (s * s)) / delta;
}

QuadResult pv_integral(const RealIntegrand& eta, const RealIntegrand& eta_derivative, double energy, double scale,
                       const Numerics& numerics, std::span<const double> breakpoints) {
  numerics.pv.validate();
  if (!(energy > 0.0)) throw DomainError("pv_integral needs E > 0");
  const double delta = numerics.pv.delta(energy);
  const double eta_e = eta(energy);
  const double window = 1e-8 * std::max(energy, 1.0);
  const RealIntegrand integrand = [&](double w) {
    const double x = w - energy;
    if (std::abs(x) < window) return eta_derivative(energy);
    return (eta(w) - eta_e * bump(x, delta)) / x;
  };
  const double split = std::max(10.0 * scale, 2.0 * (energy + delta));
  std::vector<double> breaks(breakpoints.begin(), breakpoints.end());
  breaks.insert(breaks.end(), {energy - delta, energy, energy + delta, 0.1 * scale, scale, 3.0 * scale});
  return integrate_panels(integrand, panel_points(0.0, split, breaks), true, scale, numerics.quad);
}

double LevelShiftMatrix::norm() const {
  const auto ev = eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

Eigen::VectorXd LevelShiftMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

LevelShiftMatrix gram_matrix(const FriedrichsModel& model, double energy, const Numerics& numerics) {
  if (energy > 0.0 || std::isnan(energy)) throw DomainError("gram_matrix needs E <= 0");
  if (energy == 0.0) require_threshold_exponents(model);
  const double scale = model.max_cutoff();
  const auto breaks = model_breakpoints(model, energy);
  const double split = std::max(10.0 * scale, 20.0 * std::abs(energy));
  return assemble(model, ShiftKind::S, energy, energy, [&](const RealIntegrand& eta, const RealIntegrand&) {
    const RealIntegrand f = [&](double w) { return eta(w) / (w - energy); };
    return integrate_semiinf(f, numerics.quad, scale, breaks, split);
  });
}

LevelShiftMatrix t_matrix(const FriedrichsModel& model, double energy, double energy2, const Numerics& numerics) {
  if (!(energy < 0.0) || !(energy2 <= energy)) throw DomainError("t_matrix needs E2 <= E < 0");
  const double scale = model.max_cutoff();
  auto breaks = model_breakpoints(model, energy);
  breaks.push_back(std::abs(energy2));
  const double split = std::max(10.0 * scale, 20.0 * std::abs(energy2));
  return assemble(model, ShiftKind::T, energy, energy2, [&](const RealIntegrand& eta, const RealIntegrand&) {
    const RealIntegrand f = [&](double w) { return eta(w) / ((w - energy) * (w - energy2)); };
    return integrate_semiinf(f, numerics.quad, scale, breaks, split);
  });
}

LevelShiftMatrix pv_matrix(const FriedrichsModel& model, double energy, const Numerics& numerics) {
  if (energy < 0.0 || std::isnan(energy)) throw DomainError("pv_matrix needs E >= 0");
  require_threshold_exponents(model);
  if (energy == 0.0) {
    auto s = gram_matrix(model, 0.0, numerics);
    s.kind = ShiftKind::D;
    return s;
  }
  const double scale = model.max_cutoff();
  const auto kinks = model.kinks();
  return assemble(model, ShiftKind::D, energy, energy, [&](const RealIntegrand& eta, const RealIntegrand& deta) {
    return pv_integral(eta, deta, energy, scale, numerics, kinks);
  });
}

LevelShiftMatrix shift_matrix(const FriedrichsModel& model, double energy, const Numerics& numerics) {
  return energy < 0.0 ? gram_matrix(model, energy, numerics) : pv_matrix(model, energy, numerics);
}

}  // namespace friedrichs
