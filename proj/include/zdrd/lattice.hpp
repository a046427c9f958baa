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

#include <array>
#include <cstdint>

#include "zdrd/linalg.hpp"
#include "zdrd/rng.hpp"

namespace zdrd::lattice {

/// Normalized second moment of the D4 lattice.
inline constexpr double kD4SecondMoment = 0.076603;

/// Smallest known normalized second moment of a lattice in dimension n,
/// for 1 <= n <= 8 (Z, A2, A3*, D4, D5*, E6*, E7*, E8). Throws
/// kInvalidArgument outside that range.
double best_known_second_moment(Index n);

using Point4 = std::array<double, 4>;
using Coords4 = std::array<std::int64_t, 4>;

/// Nearest point of the unscaled D4 lattice (integer vectors with even
/// coordinate sum). Among equidistant points the lexicographically
/// smallest is returned.
Coords4 d4_nearest(const Point4& x);

/// Nearest point of scale * D4, returned as lattice coordinates so that the
/// point itself is scale * coords.
Coords4 d4_quantize(const Point4& x, double scale);

/// Uniform sample from the Voronoi cell of scale * D4 around the origin,
/// {|x_i| + |x_j| <= scale for all i < j}, by rejection from [-scale, scale]^4.
Point4 d4_voronoi_sample(Rng& rng, double scale);

/// Scale at which the per-dimension second moment of the D4 cell is 1,
/// using kD4SecondMoment and the unit-scale cell volume 2.
double d4_unit_variance_scale();

}  // namespace zdrd::lattice
