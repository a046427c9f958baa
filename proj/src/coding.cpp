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

#include "zdrd/coding.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "zdrd/errors.hpp"
#include "zdrd/huffman.hpp"
#include "zdrd/lattice.hpp"
#include "zdrd/rng.hpp"

namespace zdrd {

std::string_view quantizer_name(QuantizerKind kind) {
  switch (kind) {
    case QuantizerKind::kSdusq: return "sdusq";
    case QuantizerKind::kLatticeD4: return "d4";
  }
  return "unknown";
}

QuantizerConfig default_quantizer(QuantizerKind kind, std::uint64_t seed_dither) {
  QuantizerConfig c;
  c.kind = kind;
  c.seed_dither = seed_dither;
  c.g_r = kind == QuantizerKind::kLatticeD4 ? lattice::kD4SecondMoment : 1.0 / 12.0;
  return c;
}

std::vector<std::int64_t> sdusq_encode(const Vector& alpha, const Vector& dither,
                                       const Vector& deltas) {
  if (alpha.size() != dither.size() || alpha.size() != deltas.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "alpha, dither and deltas differ in length");
  }
  std::vector<std::int64_t> j(static_cast<std::size_t>(alpha.size()));
  for (Index i = 0; i < alpha.size(); ++i) {
    j[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(std::round((alpha(i) + dither(i)) / deltas(i)));
  }
  return j;
}

Vector sdusq_decode(const std::vector<std::int64_t>& indices, const Vector& dither,
                    const Vector& deltas) {
  if (static_cast<Index>(indices.size()) != dither.size() || dither.size() != deltas.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "indices, dither and deltas differ in length");
  }
  Vector beta(dither.size());
  for (Index i = 0; i < beta.size(); ++i) {
    beta(i) = static_cast<double>(indices[static_cast<std::size_t>(i)]) * deltas(i) - dither(i);
  }
  return beta;
}

double space_filling_bits(double g) {
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * g);
}

double theoretical_upper_bound(double rate_bits, Index r, QuantizerKind kind, double g_r) {
  if (r <= 0) return rate_bits;
  const double g = kind == QuantizerKind::kSdusq ? 1.0 / 12.0 : g_r;
  return rate_bits + static_cast<double>(r) * space_filling_bits(g) + 1.0;
}

namespace {

struct TupleHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto x : v) {
      h ^= static_cast<std::uint64_t>(x);
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

// Standard error of the mean from non-overlapping batch means, which absorbs
// short-range correlation of the per-step lengths.
double batch_means_std_error(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const std::size_t batches = std::min<std::size_t>(50, n / 20);
  if (batches < 2) return 0.0;
  const std::size_t size = n / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < size; ++i) means[b] += x[b * size + i];
    means[b] /= static_cast<double>(size);
  }
  double mean = 0.0;
  for (const double m : means) mean += m;
  mean /= static_cast<double>(batches);
  double var = 0.0;
  for (const double m : means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(batches - 1);
  return std::sqrt(var / static_cast<double>(batches));
}

}  // namespace

CodingResult run_coding_experiment(const RealizationScheme& scheme, const GaussMarkovSource& src,
                                   const Trajectory& traj, const QuantizerConfig& config,
                                   const std::optional<std::string>& trace_csv) {
  const Index p = scheme.dim();
  if (src.state_dim() != p || traj.samples.empty() || traj.samples.front().size() != p ||
      traj.noise.size() + 1 != traj.samples.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "trajectory does not match the scheme");
  }
  const std::vector<Index> act = scheme.active_indices();
  const auto r = static_cast<Index>(act.size());
  const bool lattice_kind = config.kind == QuantizerKind::kLatticeD4;
  if (lattice_kind && r % 4 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "D4 lattice needs a multiple of 4 active dimensions, got " + std::to_string(r));
  }
  Vector deltas = Vector::Constant(r, kUnitNoiseStep);
  if (!lattice_kind && !config.deltas.empty()) {
    if (static_cast<Index>(config.deltas.size()) != r) {
      throw Error(ErrorCode::kDimensionMismatch, "one quantizer step per active dimension");
    }
    for (Index j = 0; j < r; ++j) deltas(j) = config.deltas[static_cast<std::size_t>(j)];
  }
  if ((deltas.array() <= 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument, "quantizer steps must be positive");
  }
  const double scale = lattice::d4_unit_variance_scale();

  // Pass 1: closed loop, collecting the index tuple of every step.
  const std::size_t n = traj.samples.size();
  Rng dither_rng(config.seed_dither);
  std::unordered_map<std::vector<std::int64_t>, std::uint32_t, TupleHash> ids;
  std::vector<std::vector<std::int64_t>> alphabet;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint32_t> symbols(n);
  std::vector<double> sq_err(n);

  Vector e_prev = Vector::Zero(p);
  Vector alpha(r), q(r), beta(r), full(p);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(r));
  double sq_total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const Vector k = t == 0 ? traj.samples[0]
                            : Vector(scheme.a * e_prev + src.b() * traj.noise[t - 1]);
    const Vector ek = scheme.e * k;
    for (Index j = 0; j < r; ++j) {
      const Index i = act[static_cast<std::size_t>(j)];
      alpha(j) = scheme.phi(i) * ek(i);
    }
    if (lattice_kind) {
      for (Index b = 0; b < r; b += 4) {
        const lattice::Point4 d = lattice::d4_voronoi_sample(dither_rng, scale);
        lattice::Point4 u;
        for (int c = 0; c < 4; ++c) {
          q(b + c) = d[static_cast<std::size_t>(c)];
          u[static_cast<std::size_t>(c)] = alpha(b + c) + q(b + c);
        }
        const lattice::Coords4 z = lattice::d4_quantize(u, scale);
        for (int c = 0; c < 4; ++c) {
          idx[static_cast<std::size_t>(b + c)] = z[static_cast<std::size_t>(c)];
          beta(b + c) = scale * static_cast<double>(z[static_cast<std::size_t>(c)]) - q(b + c);
        }
      }
    } else {
      for (Index j = 0; j < r; ++j) q(j) = dither_rng.uniform(-0.5, 0.5) * deltas(j);
      idx = sdusq_encode(alpha, q, deltas);
      beta = sdusq_decode(idx, q, deltas);
    }
    full.setZero();
    for (Index j = 0; j < r; ++j) {
      const Index i = act[static_cast<std::size_t>(j)];
      full(i) = scheme.theta(i) * beta(j);
    }
    const Vector e = k - scheme.e_inv * full;
    sq_err[t] = e.squaredNorm();
    sq_total += sq_err[t];
    e_prev = e;

    auto [it, inserted] = ids.try_emplace(idx, static_cast<std::uint32_t>(alphabet.size()));
    if (inserted) {
      if (alphabet.size() >= config.alphabet_cap) {
        throw Error(ErrorCode::kAlphabetOverflow,
                    "more than " + std::to_string(config.alphabet_cap) + " distinct index tuples");
      }
      alphabet.push_back(idx);
      counts.push_back(0);
    }
    ++counts[it->second];
    symbols[t] = it->second;
  }

  // Pass 2: Huffman code on the observed joint alphabet.
  const std::vector<int> lengths = huffman::code_lengths(counts);
  std::vector<double> step_bits(n);
  double bits = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    step_bits[t] = lengths[symbols[t]];
    bits += step_bits[t];
  }

  if (trace_csv) {
    std::ofstream out(*trace_csv);
    if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write trace file " + *trace_csv);
    out << "t";
    for (Index j = 0; j < r; ++j) out << ",index_" << j;
    out << ",codeword_length_bits,sq_error\n";
    char buf[64];
    for (std::size_t t = 0; t < n; ++t) {
      out << t;
      for (const auto v : alphabet[symbols[t]]) out << ',' << v;
      std::snprintf(buf, sizeof buf, "%.17g", sq_err[t]);
      out << ',' << lengths[symbols[t]] << ',' << buf << '\n';
    }
  }

  CodingResult res;
  res.kind = config.kind;
  res.r = r;
  res.n_steps = static_cast<std::int64_t>(n);
  res.alphabet_size = alphabet.size();
  res.empirical_rate_bits = bits / static_cast<double>(n);
  res.empirical_entropy_bits = huffman::entropy_bits(counts);
  res.empirical_mse = sq_total / static_cast<double>(n);
  res.rate_std_error = batch_means_std_error(step_bits);
  return res;
}

}  // namespace zdrd
