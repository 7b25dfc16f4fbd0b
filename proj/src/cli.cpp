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

#include "friedrichs/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "friedrichs/errors.hpp"
#include "friedrichs/oracle.hpp"
#include "friedrichs/solver.hpp"
#include "friedrichs/spectral.hpp"
#include "friedrichs/thresholds.hpp"

namespace friedrichs::cli {

namespace {

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  std::ofstream os(config.out_dir / name);
  if (!os) throw ConfigError("cannot write " + (config.out_dir / name).string());
  return os;
}

std::vector<std::size_t> selected_branches(const RunConfig& config, std::size_t n) {
  std::vector<std::size_t> out;
  if (config.branches.empty()) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t b : config.branches) {
    if (b < 1 || b > n) throw ConfigError("branch index out of range: " + std::to_string(b));
    out.push_back(b - 1);
  }
  return out;
}

std::vector<double> lambda_values(const RunConfig& config) {
  if (config.lambda_steps < 1) throw ConfigError("--lambda-steps must be positive");
  if (config.lambda_min < 0.0 || config.lambda_max < config.lambda_min)
    throw ConfigError("lambda range must be nonnegative and ascending");
  std::vector<double> out;
  if (config.lambda_steps == 1) return {config.lambda_min};
  const bool logarithmic = config.lambda_min > 0.0;
  for (int k = 0; k < config.lambda_steps; ++k) {
    const double t = static_cast<double>(k) / (config.lambda_steps - 1);
    out.push_back(logarithmic ? config.lambda_min * std::pow(config.lambda_max / config.lambda_min, t)
                              : config.lambda_min + t * (config.lambda_max - config.lambda_min));
  }
  out.back() = config.lambda_max;
  return out;
}

// Bisection for kappa_n(E) = E between two grid energies with a sign change.
double refine_crossing(const FriedrichsModel& model, std::size_t n, double lo, double hi, const Numerics& numerics) {
  const auto gap = [&](double e) { return kappa_at(model, e, numerics).kappa(static_cast<Eigen::Index>(n)) - e; };
  const bool lo_positive = gap(lo) > 0.0;
  for (int it = 0; it < 100 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((gap(mid) > 0.0) == lo_positive) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Runs job(i) for i in [0, count) on at most hardware_concurrency threads.
template <class Job>
void parallel_for(std::size_t count, Job job) {
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(count);
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  auto* preset = sub->add_option("--preset", cfg.preset, "Built-in model: hydrogen-4level | three-level-fig");
  auto* model = sub->add_option("--model", cfg.model_file, "JSON model file");
  preset->excludes(model);
  model->excludes(preset);
  sub->add_option("--out", cfg.out_dir, "Output directory");
  sub->add_option("--lambda", cfg.lambda, "Override the coupling lambda");
  sub->add_option("--lambda-sq", cfg.lambda_sq, "Override the coupling via lambda^2");
  sub->add_option("--rel-tol", cfg.rel_tol, "Quadrature relative tolerance");
  sub->add_option("--abs-tol", cfg.abs_tol, "Quadrature absolute tolerance");
}

}  // namespace

io::ModelConfig resolve_model(const RunConfig& config) {
  if (config.preset.empty() == config.model_file.empty())
    throw ConfigError("exactly one of --preset or --model is required");
  auto cfg = config.preset.empty() ? io::load_model(config.model_file) : io::preset(config.preset);
  if (config.lambda && config.lambda_sq) throw ConfigError("--lambda and --lambda-sq are mutually exclusive");
  if (config.lambda) cfg.model = cfg.model.with_lambda(*config.lambda);
  if (config.lambda_sq) {
    if (*config.lambda_sq < 0.0) throw ConfigError("--lambda-sq must be nonnegative");
    cfg.model = cfg.model.with_lambda(std::sqrt(*config.lambda_sq));
  }
  if (config.rel_tol) cfg.numerics.quad.rel_tol = *config.rel_tol;
  if (config.abs_tol) cfg.numerics.quad.abs_tol = *config.abs_tol;
  try {
    cfg.numerics.quad.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

int analyze(const RunConfig& config, std::ostream& log) {
  const auto cfg = resolve_model(config);
  const auto report = solve(cfg.model, cfg.numerics);
  auto os = open_output(config, "solve_report.json");
  auto doc = io::to_json(report, cfg.model);
  doc["model"] = io::to_json(cfg.model);
  doc["model_hash"] = io::model_hash(cfg);
  os << doc.dump(2) << "\n";
  log << "negative eigenenergies: " << report.count << "\n";
  for (const auto& st : report.states)
    log << "  E_" << st.branch + 1 << " = " << io::fmt(st.energy) << "  (continuum weight "
        << io::fmt(st.continuum_norm_sq) << ")\n";
  return kExitOk;
}

int sweep_lambda(const RunConfig& config, std::ostream& log) {
  const auto cfg = resolve_model(config);
  const auto lambdas = lambda_values(config);
  const std::size_t n = cfg.model.size();
  const double top = cfg.model.levels().back();
  auto os = open_output(config, "sweep_lambda.csv");
  io::write_metadata(os, cfg, "sweep-lambda");
  os << "lambda,M";
  for (std::size_t i = 1; i <= n; ++i) os << ",omegaN_minus_kappa0_" << i;
  for (std::size_t i = 1; i <= n; ++i) os << ",E_" << i;
  os << "\n";
  std::vector<SolveReport> reports(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) { reports[i] = solve(cfg.model.with_lambda(lambdas[i]), cfg.numerics); });
  for (std::size_t row = 0; row < lambdas.size(); ++row) {
    const double lam = lambdas[row];
    const auto& report = reports[row];
    os << io::fmt(lam) << "," << report.count;
    for (Eigen::Index i = 0; i < report.kappa_at_zero.size(); ++i) os << "," << io::fmt(top - report.kappa_at_zero(i));
    for (std::size_t i = 0; i < n; ++i) os << "," << (i < report.states.size() ? io::fmt(report.states[i].energy) : "");
    os << "\n";
  }
  log << "wrote " << lambdas.size() << " rows to " << (config.out_dir / "sweep_lambda.csv").string() << "\n";
  return kExitOk;
}

int kappa_curves(const RunConfig& config, std::ostream& log) {
  const auto cfg = resolve_model(config);
  if (config.e_steps < 2 || !(config.e_max > config.e_min)) throw ConfigError("energy grid needs e_min < e_max and steps >= 2");
  std::vector<double> grid;
  for (int k = 0; k < config.e_steps; ++k)
    grid.push_back(config.e_min + (config.e_max - config.e_min) * k / (config.e_steps - 1));
  const auto branches = selected_branches(config, cfg.model.size());
  const auto curve = kappa_curve(cfg.model, grid, cfg.numerics);
  const double top = cfg.model.levels().back();

  auto os = open_output(config, "kappa_curves.csv");
  io::write_metadata(os, cfg, "kappa-curves");
  os << "E";
  for (auto b : branches) os << ",kappa_" << b + 1;
  for (auto b : branches) os << ",omegaN_minus_kappa_" << b + 1;
  os << ",omegaN_minus_E\n";
  for (const auto& pt : curve) {
    os << io::fmt(pt.energy);
    for (auto b : branches) os << "," << io::fmt(pt.kappa(static_cast<Eigen::Index>(b)));
    for (auto b : branches) os << "," << io::fmt(top - pt.kappa(static_cast<Eigen::Index>(b)));
    os << "," << io::fmt(top - pt.energy) << "\n";
  }

  auto side = open_output(config, "kappa_intersections.csv");
  io::write_metadata(side, cfg, "kappa-curves");
  side << "branch,E\n";
  int marked = 0;
  for (auto b : branches) {
    const auto bi = static_cast<Eigen::Index>(b);
    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
      const double g0 = curve[k].kappa(bi) - curve[k].energy;
      const double g1 = curve[k + 1].kappa(bi) - curve[k + 1].energy;
      if ((g0 > 0.0) == (g1 > 0.0)) continue;
      side << b + 1 << "," << io::fmt(refine_crossing(cfg.model, b, curve[k].energy, curve[k + 1].energy, cfg.numerics))
           << "\n";
      ++marked;
    }
  }
  log << "wrote " << curve.size() << " grid points, " << marked << " intersections\n";
  return kExitOk;
}

int thresholds(const RunConfig& config, std::ostream& log) {
  const auto cfg = resolve_model(config);
  const auto report = verdict(cfg.model, cfg.numerics);
  auto os = open_output(config, "threshold_report.json");
  auto doc = io::to_json(report);
  doc["model_hash"] = io::model_hash(cfg);
  os << doc.dump(2) << "\n";
  const auto table = io::threshold_table(report, cfg.model);
  open_output(config, "threshold_table.txt") << table;
  log << table;
  return kExitOk;
}

int oracle_check(const RunConfig& config, std::ostream& log) {
  const auto cfg = resolve_model(config);
  for (auto m : config.grid)
    if (m < 10) throw ConfigError("--grid entries must be at least 10");
  const auto table = oracle::compare_negative_spectrum(cfg.model, config.grid, cfg.numerics, config.omega_max);
  auto os = open_output(config, "oracle_convergence.csv");
  io::write_metadata(os, cfg, "oracle-check");
  os << "M,count,expected_count,branch,E_discrete,E_solver,abs_error,fidelity\n";
  for (const auto& row : table.rows) {
    if (row.energies.empty()) os << row.m << "," << row.count << "," << table.expected_count << ",,,,,\n";
    for (std::size_t k = 0; k < row.energies.size(); ++k) {
      os << row.m << "," << row.count << "," << table.expected_count << "," << k + 1 << "," << io::fmt(row.energies[k]);
      if (k < row.abs_errors.size())
        os << "," << io::fmt(table.solver_energies[k]) << "," << io::fmt(row.abs_errors[k]) << ","
           << io::fmt(row.fidelities[k]);
      else
        os << ",,,";
      os << "\n";
    }
  }
  log << "oracle: expected " << table.expected_count << " negative eigenvalues, "
      << (table.converged ? "converged" : "NOT converged") << "\n";
  return table.converged ? kExitOk : kExitNumerical;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bound states of the N-level Friedrichs model"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* an = app.add_subcommand("analyze", "Count and solve all bound states below the continuum");
  add_common(an, cfg);

  auto* sw = app.add_subcommand("sweep-lambda", "Negative-eigenvalue count and kappa_n(0) against lambda");
  add_common(sw, cfg);
  sw->add_option("--lambda-min", cfg.lambda_min, "Smallest coupling lambda");
  sw->add_option("--lambda-max", cfg.lambda_max, "Largest coupling lambda");
  sw->add_option("--lambda-steps", cfg.lambda_steps, "Number of lambda values");

  auto* kc = app.add_subcommand("kappa-curves", "Eigencurves kappa_n(E) on an energy grid");
  add_common(kc, cfg);
  kc->add_option("--e-min", cfg.e_min, "Lower edge of the energy grid");
  kc->add_option("--e-max", cfg.e_max, "Upper edge of the energy grid");
  kc->add_option("--e-steps", cfg.e_steps, "Number of energy points");
  kc->add_option("--branches", cfg.branches, "One-based branch indices")->delimiter(',');

  auto* th = app.add_subcommand("thresholds", "Weak-coupling certificate against embedded eigenvalues");
  add_common(th, cfg);

  auto* oc = app.add_subcommand("oracle-check", "Compare with a discretized-continuum diagonalization");
  add_common(oc, cfg);
  oc->add_option("--grid", cfg.grid, "Continuum node counts")->delimiter(',');
  oc->add_option("--omega-max", cfg.omega_max, "Upper edge of the clustered panels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (an->parsed()) return analyze(cfg, out);
    if (sw->parsed()) return sweep_lambda(cfg, out);
    if (kc->parsed()) return kappa_curves(cfg, out);
    if (th->parsed()) return thresholds(cfg, out);
    return oracle_check(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace friedrichs::cli
