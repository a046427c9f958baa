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

#include "zdrd/rd_curve.hpp"

#include <cmath>

#include "parallel.hpp"
#include "zdrd/coding.hpp"
#include "zdrd/errors.hpp"
#include "zdrd/lattice.hpp"
#include "zdrd/realization.hpp"

namespace zdrd {

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "distortion grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw Error(ErrorCode::kBadDistortion, "grid values must be positive and finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "distortion grid must be strictly increasing");
    }
  }
}

RdCurve rd_curve(const GaussMarkovSource& src, const std::vector<double>& grid,
                 const RdOptions& options) {
  validate_grid(grid);
  RdCurve curve;
  curve.points.resize(grid.size());
  detail::parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    RdPoint& pt = curve.points[i];
    pt.distortion = grid[i];
    try {
      const NrdfSolution sol = nrdf(src, grid[i], options.solver);
      const RealizationScheme scheme = build_realization(src, sol, options.active_tol);
      pt.rate_lower_bits = sol.rate_bits;
      pt.active_dims = scheme.r;
      pt.rate_upper_scalar_bits =
          theoretical_upper_bound(sol.rate_bits, scheme.r, QuantizerKind::kSdusq, 1.0 / 12.0);
      if (scheme.r == 0) {
        pt.rate_upper_vector_bits = sol.rate_bits;
      } else if (scheme.r <= 8) {
        pt.rate_upper_vector_bits =
            theoretical_upper_bound(sol.rate_bits, scheme.r, QuantizerKind::kLatticeD4,
                                    lattice::best_known_second_moment(scheme.r));
      }
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
    }
  });
  return curve;
}

}  // namespace zdrd
