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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "zdrd/coding.hpp"
#include "zdrd/errors.hpp"
#include "zdrd/huffman.hpp"
#include "zdrd/lattice.hpp"
#include "zdrd/nrdf_solver.hpp"

using namespace zdrd;
using zdrd::testing::preset_source;
using zdrd::testing::scalar_source;

namespace {

const Vector kStep1 = Vector::Constant(1, kUnitNoiseStep);

Vector v1(double x) { return Vector::Constant(1, x); }

// Kolmogorov-Smirnov distance of a sample from U(lo, hi).
double ks_uniform(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = std::clamp((xs[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double sq_dist(const lattice::Point4& x, const lattice::Coords4& z) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += (x[i] - static_cast<double>(z[i])) * (x[i] - static_cast<double>(z[i]));
  return s;
}

// Exhaustive nearest D4 point over a box around the input.
lattice::Coords4 d4_brute(const lattice::Point4& x) {
  lattice::Coords4 best{};
  double best_d = INFINITY;
  lattice::Coords4 base;
  for (int i = 0; i < 4; ++i) base[i] = static_cast<std::int64_t>(std::floor(x[i]));
  for (int m = 0; m < 256; ++m) {
    lattice::Coords4 z;
    int code = m;
    for (int i = 0; i < 4; ++i, code /= 4) z[i] = base[i] - 1 + code % 4;
    if ((z[0] + z[1] + z[2] + z[3]) % 2 != 0) continue;
    const double d = sq_dist(x, z);
    if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && z < best)) {
      best_d = d;
      best = z;
    }
  }
  return best;
}

CodingResult run_scalar(double d, std::int64_t n, std::uint64_t seed = 1) {
  const GaussMarkovSource src = scalar_source(0.5);
  const RealizationScheme s = build_realization(src, nrdf(src, d));
  const Trajectory traj = simulate(src, n, seed);
  return run_coding_experiment(s, src, traj, default_quantizer(QuantizerKind::kSdusq, seed + 1));
}

}  // namespace

TEST_CASE("SDUSQ cell membership") {
  const double step = kUnitNoiseStep;
  CHECK(step * step / 12.0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sdusq_encode(v1(0.0), v1(0.0), kStep1)[0] == 0);
  CHECK(sdusq_encode(v1(0.6 * step), v1(0.0), kStep1)[0] == 1);
  CHECK(sdusq_encode(v1(0.25 * step), v1(0.25 * step), kStep1)[0] == 1);
  CHECK(sdusq_encode(v1(-0.5 * step), v1(0.0), kStep1)[0] == -1);
  CHECK(sdusq_decode({0}, v1(0.0), kStep1)(0) == 0.0);
  CHECK(sdusq_decode({2}, v1(0.3), kStep1)(0) == doctest::Approx(2.0 * step - 0.3));
  try {
    sdusq_encode(v1(0.0), Vector::Zero(2), kStep1);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("subtractive dither makes the error uniform and independent") {
  Rng rng(31);
  const double step = kUnitNoiseStep;
  const int n = 1000000;
  double sum_xi = 0.0, sum_xi2 = 0.0, sum_a = 0.0, sum_a2 = 0.0, sum_axi = 0.0;
  std::vector<double> ks_sample;
  for (int i = 0; i < n; ++i) {
    const double a = 3.0 * rng.normal();
    const double q = rng.uniform(-0.5, 0.5) * step;
    const double beta = sdusq_decode(sdusq_encode(v1(a), v1(q), kStep1), v1(q), kStep1)(0);
    const double xi = beta - a;
    sum_xi += xi, sum_xi2 += xi * xi, sum_a += a, sum_a2 += a * a, sum_axi += a * xi;
    if (i < 100000) ks_sample.push_back(xi);
  }
  const double mean_xi = sum_xi / n;
  const double var_xi = sum_xi2 / n - mean_xi * mean_xi;
  CHECK(var_xi == doctest::Approx(step * step / 12.0).epsilon(0.01));
  const double mean_a = sum_a / n;
  const double cov = sum_axi / n - mean_a * mean_xi;
  const double corr = cov / std::sqrt(var_xi * (sum_a2 / n - mean_a * mean_a));
  CHECK(std::abs(corr) <= 0.01);
  // 1% critical value of the KS statistic, 1.628 / sqrt(n).
  CHECK(ks_uniform(ks_sample, -0.5 * step, 0.5 * step) < 1.628 / std::sqrt(100000.0));
}

TEST_CASE("Huffman lengths") {
  const std::vector<std::uint64_t> counts{5, 0, 3, 1, 1};
  const std::vector<int> len = huffman::code_lengths(counts);
  CHECK(len[1] == 0);
  double kraft = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) kraft += std::ldexp(1.0, -len[i]);
  }
  CHECK(kraft == doctest::Approx(1.0));
  CHECK(huffman::mean_length(counts, len) == doctest::Approx(1.7));
  CHECK(huffman::entropy_bits(std::vector<std::uint64_t>{1, 1, 1, 1}) == doctest::Approx(2.0));
  CHECK(huffman::code_lengths(std::vector<std::uint64_t>{0, 7, 0})[1] == 0);
  CHECK(huffman::code_lengths(std::vector<std::uint64_t>{}).empty());
}

TEST_CASE("Huffman sandwich on random histograms") {
  std::mt19937_64 gen(2);
  std::geometric_distribution<int> geo(0.05);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> counts(1 + trial % 40);
    for (auto& c : counts) c = static_cast<std::uint64_t>(geo(gen));
    const std::vector<int> len = huffman::code_lengths(counts);
    const double h = huffman::entropy_bits(counts);
    const double l = huffman::mean_length(counts, len);
    std::uint64_t used = 0;
    for (auto c : counts) used += c > 0;
    if (used < 2) continue;
    CHECK(l >= h - 1e-12);
    CHECK(l <= h + 1.0 + 1e-12);
  }
}

TEST_CASE("D4 nearest point") {
  const lattice::Coords4 zero{0, 0, 0, 0};
  CHECK(lattice::d4_nearest({0.0, 0.0, 0.0, 0.0}) == zero);
  // Every neighbour at distance 1 ties; the lexicographically smallest wins.
  const lattice::Coords4 tie = lattice::d4_nearest({1.0, 0.0, 0.0, 0.0});
  CHECK(sq_dist({1.0, 0.0, 0.0, 0.0}, tie) == doctest::Approx(1.0));
  CHECK(tie == d4_brute({1.0, 0.0, 0.0, 0.0}));
  CHECK(tie == zero);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const lattice::Point4 x{u(gen), u(gen), u(gen), u(gen)};
    const lattice::Coords4 z = lattice::d4_nearest(x);
    CHECK((z[0] + z[1] + z[2] + z[3]) % 2 == 0);
    CHECK(sq_dist(x, z) == doctest::Approx(sq_dist(x, d4_brute(x))).epsilon(1e-12));
  }
}

TEST_CASE("D4 Voronoi dither has the lattice second moment") {
  Rng rng(3);
  const double scale = 1.0;
  const int n = 1000000;
  double energy = 0.0;
  for (int i = 0; i < n; ++i) {
    const lattice::Point4 x = lattice::d4_voronoi_sample(rng, scale);
    for (double c : x) energy += c * c;
    if (i < 1000) CHECK(lattice::d4_nearest(x) == lattice::Coords4{0, 0, 0, 0});
  }
  // Unit-scale cell volume is 2, so G = (E|x|^2 / 4) / 2^{1/2}.
  const double g = energy / n / 4.0 / std::sqrt(2.0);
  CHECK(g == doctest::Approx(lattice::kD4SecondMoment).epsilon(0.02));

  const double unit = lattice::d4_unit_variance_scale();
  Rng rng2(4);
  double e2 = 0.0;
  for (int i = 0; i < 200000; ++i) {
    for (double c : lattice::d4_voronoi_sample(rng2, unit)) e2 += c * c;
  }
  CHECK(e2 / 200000.0 / 4.0 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("space-filling constants") {
  CHECK(space_filling_bits(1.0 / 12.0) == doctest::Approx(0.5 * std::log2(M_PI * M_E / 6.0)).epsilon(1e-14));
  CHECK(std::abs(space_filling_bits(1.0 / 12.0) - 0.2546) <= 1e-4);
  CHECK(std::abs(space_filling_bits(lattice::kD4SecondMoment) + 0.25 - 0.4439) <= 1e-4);
  CHECK(theoretical_upper_bound(2.0, 1, QuantizerKind::kSdusq, 1.0 / 12.0) ==
        doctest::Approx(2.0 + 0.5 * std::log2(M_PI * M_E / 6.0) + 1.0));
  CHECK(theoretical_upper_bound(2.0, 4, QuantizerKind::kLatticeD4, lattice::kD4SecondMoment) ==
        doctest::Approx(2.0 + 2.0 * std::log2(2.0 * M_PI * M_E * lattice::kD4SecondMoment) + 1.0));
  CHECK(theoretical_upper_bound(2.0, 0, QuantizerKind::kSdusq, 1.0 / 12.0) == 2.0);
  CHECK(lattice::best_known_second_moment(1) == doctest::Approx(1.0 / 12.0));
  CHECK(lattice::best_known_second_moment(4) == lattice::kD4SecondMoment);
}

TEST_CASE("scalar coding run") {
  const CodingResult res = run_scalar(0.5, 100000);
  CHECK(res.r == 1);
  CHECK(res.empirical_mse == doctest::Approx(0.5).epsilon(0.05));
  CHECK(res.empirical_rate_bits <= 0.5 * std::log2(2.25) + 0.2546 + 1.0);
  CHECK(res.empirical_rate_bits >= res.empirical_entropy_bits - 1e-12);
  CHECK(res.empirical_rate_bits <= res.empirical_entropy_bits + 1.0 + 1e-12);
  CHECK(res.rate_std_error > 0.0);
  CHECK(res.n_steps == 100001);

  const CodingResult again = run_scalar(0.5, 100000);
  CHECK(again.empirical_rate_bits == res.empirical_rate_bits);
  CHECK(again.empirical_entropy_bits == res.empirical_entropy_bits);
  CHECK(again.empirical_mse == res.empirical_mse);
  CHECK(again.rate_std_error == res.rate_std_error);
  CHECK(again.alphabet_size == res.alphabet_size);
}

TEST_CASE("lattice coding run on the unstable 4x4 example") {
  const GaussMarkovSource src = preset_source("example3");
  const RealizationScheme s = build_realization(src, nrdf(src, 1.0));
  REQUIRE(s.r == 4);
  const Trajectory traj = simulate(src, 50000, 3);
  const CodingResult res =
      run_coding_experiment(s, src, traj, default_quantizer(QuantizerKind::kLatticeD4, 4));
  CHECK(res.kind == QuantizerKind::kLatticeD4);
  CHECK(res.empirical_mse == doctest::Approx(1.0).epsilon(0.05));
  const double bound = nrdf(src, res.empirical_mse).rate_bits / 4.0 + 0.4439;
  CHECK(res.empirical_rate_bits / 4.0 <= bound + 3.0 * res.rate_std_error / 4.0);
  CHECK(res.empirical_rate_bits <= res.empirical_entropy_bits + 1.0 + 1e-12);
}

TEST_CASE("lattice quantizer needs a multiple of four active dimensions") {
  const GaussMarkovSource src = preset_source("example2");
  const RealizationScheme s = build_realization(src, nrdf(src, 0.5));
  const Trajectory traj = simulate(src, 100, 3);
  try {
    run_coding_experiment(s, src, traj, default_quantizer(QuantizerKind::kLatticeD4));
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("zero-rate scheme sends nothing") {
  const GaussMarkovSource src = preset_source("example1");
  const RealizationScheme s = build_realization(src, nrdf(src, d_max(src)));
  REQUIRE(s.r == 0);
  const Trajectory traj = simulate(src, 100000, 8);
  const CodingResult res = run_coding_experiment(s, src, traj, default_quantizer(QuantizerKind::kSdusq));
  CHECK(res.empirical_rate_bits == 0.0);
  CHECK(res.empirical_mse == doctest::Approx(d_max(src)).epsilon(0.05));
}

TEST_CASE("alphabet cap") {
  const GaussMarkovSource src = preset_source("example1");
  const RealizationScheme s = build_realization(src, nrdf(src, 0.1));
  const Trajectory traj = simulate(src, 20000, 8);
  QuantizerConfig cfg = default_quantizer(QuantizerKind::kSdusq);
  cfg.alphabet_cap = 10;
  try {
    run_coding_experiment(s, src, traj, cfg);
    FAIL("expected AlphabetOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAlphabetOverflow);
  }
}

TEST_CASE("trace file has one row per step") {
  const GaussMarkovSource src = scalar_source(0.5);
  const RealizationScheme s = build_realization(src, nrdf(src, 0.5));
  const Trajectory traj = simulate(src, 50, 3);
  const auto path = std::filesystem::temp_directory_path() / "zdrd_trace_test.csv";
  run_coding_experiment(s, src, traj, default_quantizer(QuantizerKind::kSdusq), path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,index_0,codeword_length_bits,sq_error");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 51);
  std::filesystem::remove(path);
}
