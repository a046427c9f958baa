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

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zdrd/linalg.hpp"

namespace zdrd {

/// Time-invariant vector Gauss-Markov source
///
///   x_{t+1} = A x_t + B w_t,   w_t ~ N(0, I_q),   x_0 ~ N(0, sigma_x0).
///
/// A general driving-noise covariance is absorbed into B. Instances are
/// validated on construction and immutable afterwards.
class GaussMarkovSource {
 public:
  /// Throws Error(kDimensionMismatch) on inconsistent shapes and
  /// Error(kNotPsd) when sigma_x0 is asymmetric or has an eigenvalue below
  /// -1e-10.
  GaussMarkovSource(Matrix a, Matrix b, Matrix sigma_x0);

  /// Same as above with sigma_x0 = I.
  GaussMarkovSource(Matrix a, Matrix b);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& sigma_x0() const { return sigma_x0_; }
  /// B B^T.
  const Matrix& noise_covariance() const { return noise_cov_; }

  Index state_dim() const { return a_.rows(); }
  Index noise_dim() const { return b_.cols(); }

 private:
  Matrix a_;
  Matrix b_;
  Matrix sigma_x0_;
  Matrix noise_cov_;
};

struct StabilityReport {
  /// Sorted by descending magnitude, ties by descending real part.
  std::vector<std::complex<double>> eigenvalues;
  bool is_stable = true;
  /// Sum of log2|mu| over eigenvalues with |mu| > 1, in bits per vector.
  double rate_floor_bits = 0.0;
};

StabilityReport stability_report(const GaussMarkovSource& src);

/// Lifts x_{t+1} = sum_j A_j x_{t-j+1} + B w_t into companion form with state
/// (x_t, x_{t-1}, ..., x_{t-s+1}). Noise loading is B in the top-left block
/// and zero elsewhere, so the augmented noise dimension is s*q. A missing
/// sigma_x0 defaults to the sp x sp identity.
GaussMarkovSource augment_ar(std::span<const Matrix> coefficients, const Matrix& b,
                             std::optional<Matrix> sigma_x0 = std::nullopt);

/// Stationary covariance solving Sigma = A Sigma A^T + B B^T, or nullopt for
/// sources that are not strictly stable.
std::optional<Matrix> stationary_covariance(const GaussMarkovSource& src);

/// Trace of the stationary covariance for stable sources, +infinity
/// otherwise. At this distortion the nonanticipative rate is zero.
double d_max(const GaussMarkovSource& src);

struct Trajectory {
  /// n + 1 state samples x_0 .. x_n.
  std::vector<Vector> samples;
  /// n driving-noise samples w_0 .. w_{n-1}, so samples[t+1] = A samples[t] + B noise[t].
  std::vector<Vector> noise;
  std::uint64_t seed = 0;
};

/// Deterministic in (src, n, seed). Unstable sources overflow to +-inf after
/// enough steps; closed-loop consumers work from x_0 and the noise sequence.
Trajectory simulate(const GaussMarkovSource& src, std::int64_t n, std::uint64_t seed);

}  // namespace zdrd
