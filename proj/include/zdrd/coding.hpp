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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zdrd/realization.hpp"

namespace zdrd {

enum class QuantizerKind { kSdusq, kLatticeD4 };

std::string_view quantizer_name(QuantizerKind kind);

/// Step sqrt(12) gives unit quantization-noise variance, matching the unit
/// channel noise of the normalized realization.
inline const double kUnitNoiseStep = std::sqrt(12.0);

struct QuantizerConfig {
  QuantizerKind kind = QuantizerKind::kSdusq;
  /// Per-coordinate steps for SDUSQ; empty means kUnitNoiseStep everywhere.
  std::vector<double> deltas;
  std::uint64_t seed_dither = 2;
  /// Normalized second moment; used for the lattice bound.
  double g_r = 1.0 / 12.0;
  /// Largest number of distinct joint index tuples before kAlphabetOverflow.
  std::size_t alphabet_cap = std::size_t{1} << 20;
};

/// Default configuration of the given kind: unit-noise SDUSQ steps, or D4
/// with its second moment.
QuantizerConfig default_quantizer(QuantizerKind kind, std::uint64_t seed_dither = 2);

/// j_i = round((alpha_i + q_i) / delta_i), ties away from zero.
std::vector<std::int64_t> sdusq_encode(const Vector& alpha, const Vector& dither,
                                       const Vector& deltas);

/// beta_i = j_i delta_i - q_i.
Vector sdusq_decode(const std::vector<std::int64_t>& indices, const Vector& dither,
                    const Vector& deltas);

struct CodingResult {
  double empirical_rate_bits = 0.0;     // mean codeword length per time step
  double empirical_entropy_bits = 0.0;  // entropy of the joint index tuple
  double empirical_mse = 0.0;
  double rate_std_error = 0.0;  // batch-means standard error of the rate
  std::int64_t n_steps = 0;
  std::size_t alphabet_size = 0;
  Index r = 0;
  QuantizerKind kind = QuantizerKind::kSdusq;
};

/// Closed-loop simulation of the realization with dithered quantizers on
/// the active coordinates followed by a two-pass Huffman code over the joint
/// index tuple of each time step. The code is trained on the run itself and
/// does not condition on the dither. Uses traj.samples[0] and traj.noise, so
/// unstable sources are handled in error form. If trace_csv is set, one row
/// per step is written there.
///
/// Throws kDimensionMismatch, kAlphabetOverflow, and kInvalidArgument when
/// the lattice quantizer is asked for an r that is not a multiple of 4.
CodingResult run_coding_experiment(const RealizationScheme& scheme, const GaussMarkovSource& src,
                                   const Trajectory& traj, const QuantizerConfig& config,
                                   const std::optional<std::string>& trace_csv = std::nullopt);

/// Space-filling loss 1/2 log2(2 pi e G) per dimension.
double space_filling_bits(double g);

/// rate + (r/2) log2(2 pi e G) + 1, with G = 1/12 for SDUSQ. Returns rate
/// unchanged for r = 0.
double theoretical_upper_bound(double rate_bits, Index r, QuantizerKind kind, double g_r);

}  // namespace zdrd
