// Copyright 2026 The zdrd Authors
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

#include <optional>
#include <vector>

#include "zdrd/linalg.hpp"

namespace zdrd::maxdet {

/// Symmetric matrix that is affine in the decision vector:
/// F(x) = constant + sum_i x_i * coefficients[i].
struct AffineSymmetric {
  Matrix constant;
  std::vector<Matrix> coefficients;

  Index size() const { return constant.rows(); }
  Matrix evaluate(const Vector& x) const;
};

/// minimize   c^T x - log det G(x)
/// subject to F_k(x) > 0 for every constraint block k.
///
/// Either the linear cost or the log-det term may be absent.
struct Problem {
  Index num_vars = 0;
  Vector linear_cost;
  std::optional<AffineSymmetric> logdet;
  std::vector<AffineSymmetric> constraints;

  /// Sum of constraint block sizes; the duality gap on the central path is
  /// barrier_size() / t.
  Index barrier_size() const;
};

struct Options {
  double mu_factor = 0.2;        // barrier weight 1/t shrinks by this factor per outer step
  double gap_tolerance = 1e-10;  // stop when barrier_size / t falls below this
  // Accepted gap when centering stalls in floating point before gap_tolerance.
  double acceptable_gap = 1e-7;
  double initial_t = 1.0;
  int max_outer = 500;
  int max_inner = 50;
  double newton_tolerance = 1e-12;  // half squared Newton decrement
};

struct Result {
  Vector x;
  double objective = 0.0;  // c^T x - log det G(x)
  double gap = 0.0;        // barrier_size / t at termination
  double final_objective_change = 0.0;
  int outer_iterations = 0;
  int newton_steps = 0;
};

bool strictly_feasible(const std::vector<AffineSymmetric>& constraints, const Vector& x);

/// Objective value at x, nullopt outside the domain.
std::optional<double> objective(const Problem& problem, const Vector& x);

/// Barrier method from a strictly feasible x0. Throws
/// Error(kSolverDivergence) when the iteration caps are exhausted, and
/// Error(kInfeasibleModel) when x0 is not strictly feasible.
Result solve(const Problem& problem, const Vector& x0, const Options& options = {});

/// Phase 1: minimizes s subject to F_k(x) + s I > 0 and returns the first
/// central point with s < 0. Returns nullopt if the constraints have no
/// strictly feasible point.
std::optional<Vector> find_strictly_feasible(const std::vector<AffineSymmetric>& constraints,
                                             Index num_vars, const Vector& x0,
                                             const Options& options = {});

}  // namespace zdrd::maxdet
