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

#include "friedrichs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "friedrichs/errors.hpp"

namespace friedrichs::io {

using nlohmann::json;

namespace {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j.at(0).get<double>(), j.at(1).get<double>()};
  throw ConfigError("complex values must be numbers or [re, im] pairs");
}

FormFactor parse_form_factor(const json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "rational")
    return FormFactor::rational(j.at("n_index").get<int>(), j.value("a", 0.0), j.value("cutoff", 1.0));
  if (family == "hydrogen") return FormFactor::hydrogen(j.at("index").get<int>(), j.value("lambda1", 1.0));
  if (family == "tabulated") {
    std::vector<cplx> values;
    for (const auto& v : j.at("values")) values.push_back(complex_from_json(v));
    return FormFactor::tabulated(j.at("grid").get<std::vector<double>>(), std::move(values),
                                 j.at("tail_exponent").get<double>(), j.value("p_exponent", 0.5));
  }
  throw ConfigError("unknown form factor family '" + family + "'");
}

json form_factor_to_json(const FormFactor& ff) {
  return std::visit(
      [&ff](const auto& fam) -> json {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, RationalFamily>) {
          return {{"family", "rational"}, {"n_index", fam.n_index}, {"a", fam.a}, {"cutoff", fam.cutoff}};
        } else if constexpr (std::is_same_v<T, HydrogenFamily>) {
          return {{"family", "hydrogen"}, {"index", fam.index}, {"lambda1", fam.lambda1}};
        } else {
          json values = json::array();
          for (const auto& z : fam.values) values.push_back(complex_to_json(z));
          return {{"family", "tabulated"},
                  {"grid", fam.grid},
                  {"values", values},
                  {"tail_exponent", fam.tail_exponent},
                  {"p_exponent", ff.p_exponent()}};
        }
      },
      ff.family());
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

FriedrichsModel three_level_model(double lambda) {
  return FriedrichsModel({-0.01, 0.01, 0.02}, lambda,
                         {FormFactor::rational(1, 0.0), FormFactor::rational(2, 2.0), FormFactor::rational(3, 1.0)});
}

FriedrichsModel hydrogen_model() {
  const double omega = HydrogenConstants::omega_internal();
  std::vector<double> levels;
  std::vector<FormFactor> ffs;
  for (int n = 1; n <= 3; ++n) {
    levels.push_back(4.0 / 3.0 * omega * (1.0 - 1.0 / ((n + 1.0) * (n + 1.0))));
    ffs.push_back(FormFactor::hydrogen(n));
  }
  return FriedrichsModel(std::move(levels), std::sqrt(HydrogenConstants::lambda_sq), std::move(ffs),
                         UnitSystem(HydrogenConstants::lambda1));
}

std::vector<std::string> preset_names() { return {"hydrogen-4level", "three-level-fig"}; }

ModelConfig preset(std::string_view name) {
  if (name == "hydrogen-4level") return {hydrogen_model(), {}};
  if (name == "three-level-fig") return {three_level_model(0.7), {}};
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

ModelConfig parse_model(const json& doc) {
  try {
    Numerics numerics;
    if (doc.contains("quadrature")) {
      const auto& q = doc.at("quadrature");
      numerics.quad.rel_tol = q.value("rel_tol", numerics.quad.rel_tol);
      numerics.quad.abs_tol = q.value("abs_tol", numerics.quad.abs_tol);
      numerics.quad.max_subdivisions = q.value("max_subdivisions", numerics.quad.max_subdivisions);
    }
    if (doc.contains("pv")) numerics.pv.delta_cap = doc.at("pv").value("delta_cap", numerics.pv.delta_cap);
    numerics.quad.validate();
    numerics.pv.validate();

    if (doc.contains("preset")) {
      auto cfg = preset(doc.at("preset").get<std::string>());
      cfg.numerics = numerics;
      if (doc.contains("lambda")) cfg.model = cfg.model.with_lambda(doc.at("lambda").get<double>());
      if (doc.contains("lambda_sq")) cfg.model = cfg.model.with_lambda(std::sqrt(doc.at("lambda_sq").get<double>()));
      return cfg;
    }

    const UnitSystem units(doc.value("reference_cutoff", 1.0));
    std::vector<double> levels;
    if (doc.contains("levels")) {
      levels = doc.at("levels").get<std::vector<double>>();
    } else if (doc.contains("levels_physical")) {
      for (double w : doc.at("levels_physical").get<std::vector<double>>()) levels.push_back(units.to_internal(w));
    } else {
      throw ConfigError("model file needs 'levels' or 'levels_physical'");
    }
    double lambda = 0.0;
    if (doc.contains("lambda")) lambda = doc.at("lambda").get<double>();
    else if (doc.contains("lambda_sq")) lambda = std::sqrt(doc.at("lambda_sq").get<double>());
    else throw ConfigError("model file needs 'lambda' or 'lambda_sq'");
    std::vector<FormFactor> ffs;
    for (const auto& f : doc.at("form_factors")) ffs.push_back(parse_form_factor(f));
    return {FriedrichsModel(std::move(levels), lambda, std::move(ffs), units), numerics};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model file: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
}

ModelConfig load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_model(doc);
}

json to_json(const FriedrichsModel& model) {
  json ffs = json::array();
  for (const auto& ff : model.form_factors()) ffs.push_back(form_factor_to_json(ff));
  return {{"reference_cutoff", model.units().reference_cutoff()},
          {"levels", model.levels()},
          {"lambda", model.lambda()},
          {"form_factors", ffs}};
}

json to_json(const Numerics& numerics) {
  return {{"quadrature",
           {{"rel_tol", numerics.quad.rel_tol},
            {"abs_tol", numerics.quad.abs_tol},
            {"max_subdivisions", numerics.quad.max_subdivisions}}},
          {"pv", {{"delta_cap", numerics.pv.delta_cap}}}};
}

std::string model_hash(const ModelConfig& config) {
  const std::string text = to_json(config.model).dump() + to_json(config.numerics).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_metadata(std::ostream& os, const ModelConfig& config, std::string_view command) {
  os << "# friedrichs " << command << "\n";
  os << "# model_hash=" << model_hash(config) << "\n";
  os << "# lambda=" << fmt(config.model.lambda()) << " reference_cutoff=" << fmt(config.model.units().reference_cutoff())
     << "\n";
  os << "# rel_tol=" << fmt(config.numerics.quad.rel_tol) << " abs_tol=" << fmt(config.numerics.quad.abs_tol)
     << " max_subdivisions=" << config.numerics.quad.max_subdivisions
     << " delta_cap=" << fmt(config.numerics.pv.delta_cap) << "\n";
}

json to_json(const SolveReport& report, const FriedrichsModel& model) {
  json states = json::array();
  for (std::size_t k = 0; k < report.states.size(); ++k) {
    const auto& st = report.states[k];
    json c = json::array();
    for (Eigen::Index i = 0; i < st.c.size(); ++i) c.push_back(complex_to_json(st.c(i)));
    json s = {{"branch", st.branch + 1},
              {"energy", st.energy},
              {"energy_physical", model.units().to_physical(st.energy)},
              {"c", c},
              {"continuum_norm_sq", st.continuum_norm_sq},
              {"total_norm_sq", st.total_norm_sq},
              {"max_row_residual", st.row_residuals.size() ? st.row_residuals.maxCoeff() : 0.0},
              {"degenerate", st.degenerate}};
    if (k < report.roots.size()) {
      const auto& r = report.roots[k];
      s["bracket"] = {r.bracket_lo, r.bracket_hi};
      s["fixed_point_residual"] = r.residual;
      s["iterations"] = r.iterations;
    }
    states.push_back(std::move(s));
  }
  return {{"schema", kSolveSchema},
          {"count", report.count},
          {"kappa_at_zero", vector_to_json(report.kappa_at_zero)},
          {"states", states}};
}

json to_json(const ThresholdReport& report) {
  json levels = json::array();
  for (const auto& lt : report.levels) {
    levels.push_back({{"level", lt.level + 1},
                      {"lambda_n", lt.lambda_n},
                      {"lambda_n_sq", lt.lambda_n * lt.lambda_n},
                      {"alpha", lt.constants.alpha},
                      {"beta", lt.constants.beta},
                      {"gamma", lt.constants.gamma},
                      {"sup_mod_sq_derivative", lt.constants.mod_sq_derivative_sup},
                      {"lambda_bar", lt.lambda_bar},
                      {"lambda_bar_sq", lt.lambda_bar * lt.lambda_bar}});
  }
  return {{"schema", kThresholdSchema},
          {"sup_d_norm", report.sup_d.value},
          {"sup_d_argmax", report.sup_d.argmax},
          {"sup_d_search", {report.sup_d.grid_min, report.sup_d.grid_max}},
          {"sup_d_tail", report.sup_d.tail_value},
          {"n_plus", report.n_plus},
          {"R_a", report.r_a},
          {"R_b", report.r_b},
          {"lambda_a", report.lambda_a},
          {"lambda_a_sq", report.lambda_a * report.lambda_a},
          {"lambda_b", report.lambda_b},
          {"lambda_b_sq", report.lambda_b * report.lambda_b},
          {"levels", levels},
          {"bound", report.bound},
          {"bound_sq", report.bound * report.bound},
          {"bound_without_lambda_b", report.bound_without_lambda_b},
          {"binding", report.binding},
          {"lambda", report.lambda},
          {"lambda_sq", report.lambda * report.lambda},
          {"verdict", to_string(report.verdict)},
          {"diagnostics", report.diagnostics}};
}

std::string threshold_table(const ThresholdReport& r, const FriedrichsModel& model) {
  std::ostringstream os;
  os << "Energies in units of Lambda_ref = " << fmt(model.units().reference_cutoff()) << "\n";
  os << "verdict                  " << to_string(r.verdict) << "\n";
  for (const auto& d : r.diagnostics) os << "note                     " << d << "\n";
  if (r.verdict == Verdict::Inapplicable) return os.str();
  os << "sup_{E>0} ||D(E)||       " << fmt(r.sup_d.value) << "  at E* = " << fmt(r.sup_d.argmax) << "\n";
  os << "R_a                      " << fmt(r.r_a) << "\n";
  os << "R_b                      " << fmt(r.r_b) << "\n";
  os << "lambda_a^2               " << fmt(r.lambda_a * r.lambda_a) << "\n";
  os << "lambda_b^2               " << fmt(r.lambda_b * r.lambda_b) << "\n";
  os << "\n  n  lambda_n^2           alpha                beta                 gamma                lambda_bar^2\n";
  for (const auto& lt : r.levels) {
    os << std::setw(3) << lt.level + 1 << "  " << fmt(lt.lambda_n * lt.lambda_n) << "  " << fmt(lt.constants.alpha)
       << "  " << fmt(lt.constants.beta) << "  " << fmt(lt.constants.gamma) << "  " << fmt(lt.lambda_bar * lt.lambda_bar)
       << "\n";
  }
  os << "\nbound^2 (with lambda_b)  " << fmt(r.bound * r.bound) << "  [" << r.binding << "]\n";
  os << "bound^2 (without)        " << fmt(r.bound_without_lambda_b * r.bound_without_lambda_b) << "\n";
  os << "lambda^2                 " << fmt(r.lambda * r.lambda) << "\n";
  return os.str();
}

}  // namespace friedrichs::io
