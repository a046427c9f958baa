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

#include <limits>
#include <string>
#include <vector>

#include "zdrd/nrdf_solver.hpp"

namespace zdrd {

struct RdPoint {
  double distortion = 0.0;
  double rate_lower_bits = std::numeric_limits<double>::quiet_NaN();
  /// Bound achieved by r dithered scalar quantizers.
  double rate_upper_scalar_bits = std::numeric_limits<double>::quiet_NaN();
  /// Bound achieved by the best known r-dimensional lattice; NaN for r > 8.
  double rate_upper_vector_bits = std::numeric_limits<double>::quiet_NaN();
  Index active_dims = 0;
  bool failed = false;
  std::string error;
};

struct RdCurve {
  std::vector<RdPoint> points;
};

struct RdOptions {
  SolverOptions solver;
  double active_tol = 1e-9;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// One point per grid value, evaluated in parallel and stored in grid order.
/// Solver failures mark the point as failed instead of aborting the curve.
/// Throws kInvalidArgument if the grid is empty or not strictly increasing,
/// and kBadDistortion if it contains a non-positive value.
RdCurve rd_curve(const GaussMarkovSource& src, const std::vector<double>& grid,
                 const RdOptions& options = {});

/// Throws the errors documented for rd_curve.
void validate_grid(const std::vector<double>& grid);

}  // namespace zdrd
