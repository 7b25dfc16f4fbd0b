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

#pragma once

namespace friedrichs {

/// Tolerances for the adaptive integrator on [0, inf).
struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_subdivisions = 2000;

  /// Throws DomainError unless both tolerances are positive and
  /// max_subdivisions >= 10.
  void validate() const;
};

/// Bump-function regularization of the principal value. The bump half-width
/// at energy E is min(E/2, delta_cap).
struct PvSettings {
  double delta_cap = 0.5;

  double delta(double energy) const;
  void validate() const;
};

struct Numerics {
  QuadratureSettings quad;
  PvSettings pv;
};

}  // namespace friedrichs
