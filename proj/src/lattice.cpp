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

#include "zdrd/lattice.hpp"

#include <cmath>
#include <vector>

#include "zdrd/errors.hpp"

namespace zdrd::lattice {

double best_known_second_moment(Index n) {
  static constexpr double kTable[] = {1.0 / 12.0, 0.080188, 0.078543, 0.076603,
                                      0.075625,   0.074244, 0.073116, 0.071682};
  if (n < 1 || n > 8) {
    throw Error(ErrorCode::kInvalidArgument,
                "no lattice second moment tabulated for dimension " + std::to_string(n));
  }
  return kTable[n - 1];
}

namespace {

double dist2(const Point4& x, const Coords4& c) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = x[i] - static_cast<double>(c[i]);
    s += d * d;
  }
  return s;
}

// Offsets of D4 of squared norm at most 4. Two nearest points are at most
// twice the covering radius (1) apart, so every nearest point of x lies at
// one of these offsets from any other nearest point.
std::vector<Coords4> make_offsets() {
  std::vector<Coords4> out;
  out.push_back({0, 0, 0, 0});
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int si : {-1, 1}) {
        for (int sj : {-1, 1}) {
          Coords4 c{0, 0, 0, 0};
          c[i] = si;
          c[j] = sj;
          out.push_back(c);
        }
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int s : {-2, 2}) {
      Coords4 c{0, 0, 0, 0};
      c[i] = s;
      out.push_back(c);
    }
  }
  for (int mask = 0; mask < 16; ++mask) {
    Coords4 c;
    for (int i = 0; i < 4; ++i) c[i] = (mask >> i) & 1 ? 1 : -1;
    out.push_back(c);
  }
  return out;
}

}  // namespace

Coords4 d4_nearest(const Point4& x) {
  // Round every coordinate; if the sum is odd, re-round the coordinate with
  // the largest rounding error the other way.
  Coords4 f;
  std::int64_t sum = 0;
  int worst = 0;
  double worst_err = -1.0;
  for (int i = 0; i < 4; ++i) {
    f[i] = static_cast<std::int64_t>(std::round(x[i]));
    sum += f[i];
    const double err = std::abs(x[i] - static_cast<double>(f[i]));
    if (err > worst_err) {
      worst_err = err;
      worst = i;
    }
  }
  if (sum % 2 != 0) f[worst] += x[worst] > static_cast<double>(f[worst]) ? 1 : -1;

  static const std::vector<Coords4> offsets = make_offsets();
  const double d0 = dist2(x, f);
  const double tie = 1e-12 * std::max(1.0, d0);
  Coords4 best = f;
  for (const Coords4& o : offsets) {
    Coords4 c;
    for (int i = 0; i < 4; ++i) c[i] = f[i] + o[i];
    if (dist2(x, c) <= d0 + tie && c < best) best = c;
  }
  return best;
}

Coords4 d4_quantize(const Point4& x, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lattice scale must be positive");
  Point4 u;
  for (int i = 0; i < 4; ++i) u[i] = x[i] / scale;
  return d4_nearest(u);
}

Point4 d4_voronoi_sample(Rng& rng, double scale) {
  for (;;) {
    Point4 u;
    for (auto& v : u) v = rng.uniform(-1.0, 1.0);
    bool inside = true;
    for (int i = 0; i < 4 && inside; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (std::abs(u[i]) + std::abs(u[j]) > 1.0) {
          inside = false;
          break;
        }
      }
    }
    if (!inside) continue;
    for (auto& v : u) v *= scale;
    return u;
  }
}

double d4_unit_variance_scale() {
  // Per-dimension second moment = G * V^{2/4} with cell volume V = 2.
  return 1.0 / std::sqrt(kD4SecondMoment * std::sqrt(2.0));
}

}  // namespace zdrd::lattice
