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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "friedrichs/errors.hpp"
#include "friedrichs/io.hpp"
#include "friedrichs/model.hpp"
#include "oracles.hpp"

using namespace friedrichs;
namespace ref = testing_oracles;

namespace {

FriedrichsModel single(const FormFactor& ff, double level = 0.5) { return FriedrichsModel({level}, 1.0, {ff}); }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
  return g;
}

}  // namespace

TEST_CASE("unit system round trip") {
  const UnitSystem u(8.498e18);
  for (double x : {1.0, 1.55e16, 3.3e-5, 7.0e20}) CHECK(std::abs(u.to_physical(u.to_internal(x)) - x) <= 1e-14 * x);
  CHECK_THROWS_AS(UnitSystem(0.0), DomainError);
  CHECK_THROWS_AS(UnitSystem(-2.0), DomainError);
}

TEST_CASE("rational form factor values") {
  const auto m = single(FormFactor::rational(1, 0.0, 1.0));
  CHECK(std::abs(eval_form_factor(m, 0, 0.0)) == 0.0);
  CHECK(std::abs(eval_form_factor(m, 0, 1.0)) == doctest::Approx(0.25).epsilon(1e-15));

  for (int n = 1; n <= 3; ++n)
    for (double a : {0.0, 2.0, 1.0, -0.7})
      for (double cut : {1.0, 0.3, 4.0})
        for (double w : log_grid(1e-6, 1e3, 40)) {
          const auto ff = FormFactor::rational(n, a, cut);
          const double expect = ref::rational_form_factor(n, a, cut, w);
          CHECK(std::abs(ff.value(w) - cplx(expect, 0.0)) <= 1e-14 * std::max(std::abs(expect), 1e-300));
        }
}

TEST_CASE("hydrogen form factors match the closed forms") {
  const auto ff1 = FormFactor::hydrogen(1);
  CHECK(std::abs(ff1.value(1.0)) == doctest::Approx(0.25).epsilon(1e-15));
  for (int idx = 1; idx <= 3; ++idx) {
    const auto ff = FormFactor::hydrogen(idx);
    CHECK(ff.p_exponent() == 0.5);
    for (double w : log_grid(1e-8, 1e4, 80)) {
      const cplx expect = ref::hydrogen_form_factor(idx, w);
      CHECK(std::abs(ff.value(w) - expect) <= 1e-14 * std::abs(expect));
    }
  }
  // Scaled cutoff: value in units of the reference is the same function of w / lambda1.
  const auto big = FormFactor::hydrogen(2, 3.0);
  CHECK(std::abs(big.value(1.7) - ref::hydrogen_form_factor(2, 1.7, 3.0)) <= 1e-14 * std::abs(big.value(1.7)));
  CHECK_THROWS_AS(FormFactor::hydrogen(4), DomainError);
}

TEST_CASE("threshold and tail behavior of built-in families") {
  const std::vector<FormFactor> all{FormFactor::rational(1, 0.0), FormFactor::rational(2, 2.0),
                                    FormFactor::rational(3, 1.0), FormFactor::hydrogen(1),
                                    FormFactor::hydrogen(2),      FormFactor::hydrogen(3)};
  for (const auto& ff : all) {
    CHECK(std::abs(ff.value(0.0)) == 0.0);
    // v / w^{1/2} has a finite limit at threshold.
    const double r1 = std::abs(ff.value(1e-10)) / std::sqrt(1e-10);
    const double r2 = std::abs(ff.value(1e-12)) / std::sqrt(1e-12);
    CHECK(std::isfinite(r1));
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-8));
    CHECK(std::abs(ff.value(1e8)) < 1e-12);
  }
}

TEST_CASE("derivative of |v|^2") {
  const auto m = single(FormFactor::hydrogen(1));
  CHECK(eval_mod_sq_derivative(m, 0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(eval_mod_sq_derivative(m, 0, 1e6)) < 1e-20);

  const std::vector<FormFactor> all{FormFactor::rational(1, 0.0), FormFactor::rational(2, 2.0, 0.5),
                                    FormFactor::rational(3, 1.0, 2.0), FormFactor::hydrogen(1),
                                    FormFactor::hydrogen(2),      FormFactor::hydrogen(3)};
  for (const auto& ff : all) {
    double scale = 0.0;
    const auto grid = log_grid(1e-3, 1e3, 100);
    for (double w : grid) scale = std::max(scale, std::abs(ff.mod_sq_derivative(w)));
    for (double w : grid) {
      const double h = 1e-6;
      const double fd = (ff.mod_sq(w + h) - ff.mod_sq(w - h)) / (2.0 * h);
      const double d = ff.mod_sq_derivative(w);
      CHECK(std::abs(fd - d) <= 1e-5 * std::max(std::abs(d), 1e-4 * scale));
    }
  }

  // Rational n=1, a=0: the supremum over w > 0 is 1 at w = 0.
  const auto r = FormFactor::rational(1, 0.0);
  double best = 0.0;
  for (double w : log_grid(1e-9, 1e3, 20000)) best = std::max(best, std::abs(r.mod_sq_derivative(w)));
  CHECK(best <= 1.0);
  CHECK(best == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("square norms") {
  CHECK(l2_norm_sq(single(FormFactor::hydrogen(1)), 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(l2_norm_sq(single(FormFactor::rational(1, 0.0)), 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(l2_norm_sq(single(FormFactor::rational(1, 0.0, 3.0)), 0) == doctest::Approx(9.0 / 6.0).epsilon(1e-10));

  const auto zero = FormFactor::tabulated({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}, -2.0);
  CHECK(l2_norm_sq(single(zero), 0) == 0.0);

  for (const auto& ff : {FormFactor::hydrogen(2), FormFactor::hydrogen(3), FormFactor::rational(2, 2.0),
                         FormFactor::rational(3, 1.0, 0.7)}) {
    const double expect = ref::semiinf([&](double w) { return ff.mod_sq(w); });
    CHECK(l2_norm_sq(single(ff), 0) == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("tabulated form factor") {
  const std::vector<double> grid{0.1, 0.5, 1.0, 2.0};
  const std::vector<cplx> vals{{0.1, 0.0}, {0.4, 0.1}, {0.3, -0.2}, {0.1, 0.0}};
  const auto ff = FormFactor::tabulated(grid, vals, -2.0);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(ff.value(grid[i]) - vals[i]) < 1e-15);
  CHECK(std::abs(ff.value(0.75) - 0.5 * (vals[1] + vals[2])) < 1e-15);
  CHECK(std::abs(ff.value(4.0)) == doctest::Approx(0.1 * 0.25));
  CHECK(std::abs(ff.value(0.025)) == doctest::Approx(0.1 * 0.5));
  CHECK_THROWS_AS(FormFactor::tabulated(grid, vals, -0.4), DomainError);
  CHECK_THROWS_AS(FormFactor::tabulated({0.5, 0.1}, {1.0, 1.0}, -2.0), DomainError);
}

TEST_CASE("model validation and domain errors") {
  const auto ff = FormFactor::rational(1, 0.0);
  CHECK_THROWS_AS(FriedrichsModel({0.2, 0.1}, 1.0, {ff, ff}), DomainError);
  CHECK_THROWS_AS(FriedrichsModel({0.1}, 1.0, {ff, ff}), DomainError);
  CHECK_THROWS_AS(FriedrichsModel({}, 1.0, {}), DomainError);
  CHECK_NOTHROW(FriedrichsModel({0.1, 0.1}, 1.0, {ff, ff}));
  const auto m = single(ff);
  CHECK_THROWS_AS(eval_form_factor(m, 0, -1e-3), DomainError);
  CHECK_THROWS_AS(eval_form_factor(m, 1, 0.5), DomainError);
  CHECK_THROWS_AS(eval_mod_sq_derivative(m, 0, -1.0), DomainError);
}

TEST_CASE("hydrogen preset levels") {
  const auto m = io::hydrogen_model();
  const double om = io::HydrogenConstants::omega_internal();
  REQUIRE(m.size() == 3);
  CHECK(om == doctest::Approx(1.55e16 / 8.498e18).epsilon(1e-15));
  CHECK(m.level(0) == doctest::Approx(om).epsilon(1e-14));
  CHECK(m.level(1) == doctest::Approx(om * 32.0 / 27.0).epsilon(1e-14));
  CHECK(m.level(2) == doctest::Approx(om * 5.0 / 4.0).epsilon(1e-14));
  CHECK(m.lambda_sq() == doctest::Approx(6.435e-9).epsilon(1e-14));
  CHECK(m.units().reference_cutoff() == 8.498e18);
}
