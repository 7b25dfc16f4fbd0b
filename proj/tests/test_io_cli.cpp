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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "friedrichs/cli.hpp"
#include "friedrichs/errors.hpp"
#include "friedrichs/io.hpp"

using namespace friedrichs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "friedrichs");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("friedrichs_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Data rows of a CSV as vectors of cells, skipping metadata and the header.
std::vector<std::vector<std::string>> rows(const fs::path& p, std::vector<std::string>* header = nullptr) {
  std::ifstream is(p);
  std::string line;
  std::vector<std::vector<std::string>> out;
  bool seen_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!seen_header) {
      seen_header = true;
      if (header) *header = cells;
      continue;
    }
    out.push_back(cells);
  }
  return out;
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& doc) {
  const auto p = dir / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

}  // namespace

TEST_CASE("presets") {
  const auto names = io::preset_names();
  CHECK(std::find(names.begin(), names.end(), "hydrogen-4level") != names.end());
  CHECK(std::find(names.begin(), names.end(), "three-level-fig") != names.end());
  const auto three = io::preset("three-level-fig");
  CHECK(three.model.levels() == std::vector<double>{-0.01, 0.01, 0.02});
  CHECK(three.model.lambda() == 0.7);
  CHECK_THROWS_AS(io::preset("nope"), ConfigError);
}

TEST_CASE("model files") {
  const auto dir = scratch("parse");
  const json doc = {{"reference_cutoff", 2.0},
                    {"levels", {-0.1, 0.2}},
                    {"lambda", 0.3},
                    {"form_factors",
                     {{{"family", "rational"}, {"n_index", 1}, {"a", 0.0}, {"cutoff", 1.0}},
                      {{"family", "tabulated"},
                       {"grid", {0.1, 1.0, 2.0}},
                       {"values", {0.1, json::array({0.2, 0.1}), 0.0}},
                       {"tail_exponent", -2.0}}}},
                    {"quadrature", {{"rel_tol", 1e-9}}}};
  const auto cfg = io::load_model(write_json(dir, "m.json", doc));
  CHECK(cfg.model.size() == 2);
  CHECK(cfg.model.lambda() == 0.3);
  CHECK(cfg.model.units().reference_cutoff() == 2.0);
  CHECK(cfg.numerics.quad.rel_tol == 1e-9);
  CHECK(cfg.model.form_factor(1).value(1.0) == cplx(0.2, 0.1));

  // Round trip through the serializer keeps the hash.
  const auto again = io::parse_model(io::to_json(cfg.model));
  CHECK(io::model_hash({again.model, cfg.numerics}) == io::model_hash(cfg));
  CHECK(io::model_hash({cfg.model.with_lambda(0.31), cfg.numerics}) != io::model_hash(cfg));

  const auto physical = io::parse_model({{"reference_cutoff", 10.0},
                                         {"levels_physical", {5.0}},
                                         {"lambda_sq", 0.04},
                                         {"form_factors", {{{"family", "hydrogen"}, {"index", 2}}}}});
  CHECK(physical.model.level(0) == 0.5);
  CHECK(physical.model.lambda() == doctest::Approx(0.2));

  const auto over = io::parse_model({{"preset", "three-level-fig"}, {"lambda", 10.0}});
  CHECK(over.model.lambda() == 10.0);

  CHECK_THROWS_AS(io::parse_model({{"levels", {0.2, 0.1}}, {"lambda", 1.0},
                                   {"form_factors", {{{"family", "hydrogen"}, {"index", 1}},
                                                     {{"family", "hydrogen"}, {"index", 2}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_model({{"levels", {0.1}}, {"lambda", 1.0}, {"form_factors", {{{"family", "gauss"}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_model({{"levels", {0.1}}, {"form_factors", json::array()}}), ConfigError);
  CHECK_THROWS_AS(io::load_model(dir / "missing.json"), ConfigError);
}

TEST_CASE("analyze") {
  const auto dir = scratch("analyze");
  auto r = run_cli({"analyze", "--preset", "three-level-fig", "--lambda", "10", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  auto doc = json::parse(slurp(dir / "solve_report.json"));
  CHECK(doc["schema"] == "friedrichs.solve_report/1");
  CHECK(doc["count"] == 3);
  CHECK(doc["states"].size() == 3);
  for (const auto& s : doc["states"]) CHECK(s["total_norm_sq"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));

  const json up = {{"levels", {0.1, 0.2}},
                   {"lambda", 0.0},
                   {"form_factors", {{{"family", "rational"}, {"n_index", 1}}, {{"family", "rational"}, {"n_index", 2}}}}};
  r = run_cli({"analyze", "--model", write_json(dir, "up.json", up).string(), "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(json::parse(slurp(dir / "solve_report.json"))["count"] == 0);

  r = run_cli({"analyze", "--preset", "hydrogen-4level", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(json::parse(slurp(dir / "solve_report.json"))["count"] == 0);
}

TEST_CASE("sweep-lambda") {
  const auto a = scratch("sweep_a");
  const auto b = scratch("sweep_b");
  for (const auto& d : {a, b})
    REQUIRE(run_cli({"sweep-lambda", "--preset", "three-level-fig", "--lambda-steps", "12", "--out", d.string()}).code ==
            0);
  CHECK(slurp(a / "sweep_lambda.csv") == slurp(b / "sweep_lambda.csv"));

  const auto text = slurp(a / "sweep_lambda.csv");
  CHECK(text.find("# model_hash") != std::string::npos);
  CHECK(text.find("rel_tol") != std::string::npos);
  std::vector<std::string> header;
  const auto data = rows(a / "sweep_lambda.csv", &header);
  REQUIRE(data.size() == 12);
  CHECK(header[0] == "lambda");
  CHECK(header[1] == "M");
  CHECK(header.size() == 8);
  CHECK(std::stod(data.front()[0]) == doctest::Approx(0.1));
  CHECK(std::stod(data.back()[0]) == doctest::Approx(10.0));
  CHECK(data.front()[1] == "1");
  CHECK(data.back()[1] == "3");
  int prev = 0;
  for (const auto& row : data) {
    const int m = std::stoi(row[1]);
    CHECK(m >= prev);
    prev = m;
    for (int k = 0; k < 3; ++k) CHECK(row[5 + k].empty() == (k >= m));
  }

  REQUIRE(run_cli({"sweep-lambda", "--preset", "three-level-fig", "--lambda-min", "0", "--lambda-max", "0",
                   "--lambda-steps", "1", "--out", a.string()})
              .code == 0);
  const auto zero = rows(a / "sweep_lambda.csv");
  REQUIRE(zero.size() == 1);
  CHECK(zero[0][1] == "1");
}

TEST_CASE("kappa-curves") {
  const auto dir = scratch("kappa");
  REQUIRE(run_cli({"kappa-curves", "--preset", "three-level-fig", "--lambda", "0", "--e-steps", "20", "--out",
                   dir.string()})
              .code == 0);
  std::vector<std::string> header;
  for (const auto& row : rows(dir / "kappa_curves.csv", &header)) {
    CHECK(std::stod(row[1]) == -0.01);
    CHECK(std::stod(row[2]) == 0.01);
    CHECK(std::stod(row[3]) == 0.02);
  }
  CHECK(header == std::vector<std::string>{"E", "kappa_1", "kappa_2", "kappa_3", "omegaN_minus_kappa_1",
                                           "omegaN_minus_kappa_2", "omegaN_minus_kappa_3", "omegaN_minus_E"});

  REQUIRE(run_cli({"kappa-curves", "--preset", "three-level-fig", "--lambda", "0.1", "--e-min", "-0.1", "--e-max",
                   "-0.001", "--e-steps", "50", "--out", dir.string()})
              .code == 0);
  auto marks = rows(dir / "kappa_intersections.csv");
  REQUIRE(marks.size() == 1);
  CHECK(std::stod(marks[0][1]) == doctest::Approx(-0.02).epsilon(0.25));

  REQUIRE(run_cli({"kappa-curves", "--preset", "three-level-fig", "--e-min", "-0.5", "--e-max", "-1e-4", "--e-steps",
                   "200", "--branches", "1,2", "--out", dir.string()})
              .code == 0);
  marks = rows(dir / "kappa_intersections.csv");
  REQUIRE(marks.size() == 2);
  CHECK(std::stod(marks[0][1]) == doctest::Approx(-0.3).epsilon(0.2));
  CHECK(std::abs(std::stod(marks[1][1])) < 0.05);

  CHECK(run_cli({"kappa-curves", "--preset", "three-level-fig", "--branches", "4", "--out", dir.string()}).code ==
        cli::kExitConfig);
}

TEST_CASE("thresholds") {
  const auto dir = scratch("thresholds");
  auto r = run_cli({"thresholds", "--preset", "hydrogen-4level", "--out", dir.string()});
  REQUIRE(r.code == 0);
  auto doc = json::parse(slurp(dir / "threshold_report.json"));
  CHECK(doc["schema"] == "friedrichs.threshold_report/1");
  CHECK(doc["verdict"] == "true");
  CHECK(doc["binding"] == "lambda_bar_3");
  CHECK(doc["levels"].size() == 3);
  CHECK(r.out.find("verdict") != std::string::npos);
  CHECK(slurp(dir / "threshold_table.txt") == r.out);

  r = run_cli({"thresholds", "--preset", "hydrogen-4level", "--lambda-sq", "1e-5", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(json::parse(slurp(dir / "threshold_report.json"))["verdict"] == "false");

  const json deg = {{"levels", {0.1, 0.1}},
                    {"lambda", 0.01},
                    {"form_factors", {{{"family", "rational"}, {"n_index", 1}}, {{"family", "rational"}, {"n_index", 2}}}}};
  r = run_cli({"thresholds", "--model", write_json(dir, "deg.json", deg).string(), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(json::parse(slurp(dir / "threshold_report.json"))["verdict"] == "inapplicable");
}

TEST_CASE("oracle-check") {
  const auto dir = scratch("oracle");
  REQUIRE(run_cli({"oracle-check", "--preset", "three-level-fig", "--lambda", "0", "--grid", "100,200", "--out",
                   dir.string()})
              .code == 0);
  // The discrete energy is exactly w_1; the solver side carries its 1e-12 bisection width.
  for (const auto& row : rows(dir / "oracle_convergence.csv")) {
    CHECK(std::stod(row[4]) == -0.01);
    CHECK(std::stod(row[6]) <= 1e-12);
  }

  REQUIRE(run_cli({"oracle-check", "--preset", "hydrogen-4level", "--grid", "200,400", "--out", dir.string()}).code ==
          0);
  for (const auto& row : rows(dir / "oracle_convergence.csv")) CHECK(row[1] == "0");

  CHECK(run_cli({"oracle-check", "--preset", "hydrogen-4level", "--grid", "5", "--out", dir.string()}).code ==
        cli::kExitConfig);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(run_cli({"analyze", "--out", dir.string()}).code == cli::kExitConfig);
  CHECK(run_cli({"analyze", "--preset", "nope", "--out", dir.string()}).code == cli::kExitConfig);
  CHECK(run_cli({"analyze", "--model", (dir / "missing.json").string()}).code == cli::kExitConfig);
  CHECK(run_cli({"analyze", "--preset", "three-level-fig", "--bogus"}).code == cli::kExitConfig);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitConfig);
  CHECK(run_cli({"analyze", "--preset", "three-level-fig", "--rel-tol", "-1", "--out", dir.string()}).code ==
        cli::kExitConfig);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
  // A one-subdivision budget cannot meet the tolerance: numerical failure.
  const json tight = {{"preset", "three-level-fig"}, {"quadrature", {{"max_subdivisions", 10}, {"rel_tol", 1e-15}, {"abs_tol", 1e-300}}}};
  CHECK(run_cli({"analyze", "--model", write_json(dir, "tight.json", tight).string(), "--out", dir.string()}).code ==
        cli::kExitNumerical);
}
