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

#include <cstdint>
#include <vector>

#include "zdrd/nrdf_solver.hpp"
#include "zdrd/source_model.hpp"

namespace zdrd {

/// Congruence E with E pi E^T = diag(pi_tilde) and E lambda E^T =
/// diag(lambda_tilde). pi_tilde holds the eigenvalues of pi in descending
/// order and lambda_tilde = pi_tilde .* S, where S are the eigenvalues of
/// pi^{-1/2} lambda pi^{-1/2}, also descending.
struct JointDiagonalization {
  Matrix e;
  Matrix e_inv;
  Vector pi_tilde;
  Vector lambda_tilde;
};

/// Throws kNotPd when either input is not symmetric positive definite.
JointDiagonalization joint_diagonalize(const Matrix& pi, const Matrix& lambda);

struct WaterfillFactors {
  Vector h_tilde;  // 1 - pi/lambda, zero on inactive coordinates
  Vector theta;    // sqrt(pi * h)
  Vector phi;      // sqrt(h / pi)
  std::vector<bool> active;
  Index r = 0;
};

/// Per-coordinate factors of the diagonal test channel. A coordinate is
/// active when its h exceeds tol; inactive ones get theta = phi = h = 0.
/// Throws kOrderViolation if pi_tilde[i] > lambda_tilde[i] + tol.
WaterfillFactors waterfill_factors(const Vector& pi_tilde, const Vector& lambda_tilde,
                                   double tol = 1e-9);

/// Feedback test channel equivalent to the optimal NRDF channel:
///
///   k_t = x_t - A y_{t-1}
///   alpha_t = Phi E k_t,   beta_t = alpha_t + v_t,   v_t ~ N(0, I_r)
///   y_t = A y_{t-1} + E^{-1} Theta beta_t
///
/// restricted to the r active coordinates.
struct RealizationScheme {
  Matrix a;  // source transition, used by the predictor A y_{t-1}
  Matrix e;
  Matrix e_inv;
  Vector pi_tilde;
  Vector lambda_tilde;
  Vector h_tilde;
  Vector theta;
  Vector phi;
  Matrix h;        // I - pi lambda^{-1} = E^{-1} diag(h_tilde) E
  Matrix sigma_v;  // pi h^T
  std::vector<bool> active;
  Index r = 0;

  Index dim() const { return a.rows(); }
  /// Positions of the active coordinates in increasing order.
  std::vector<Index> active_indices() const;
};

RealizationScheme build_realization(const GaussMarkovSource& src, const NrdfSolution& sol,
                                    double tol = 1e-9);

/// One closed-loop run of the realization with Gaussian channel noise.
/// Entries of x and y can overflow for unstable sources; k, err, alpha and
/// beta are propagated in error form and stay finite.
struct ChannelRun {
  std::vector<Vector> x;
  std::vector<Vector> y;
  std::vector<Vector> k;      // innovations x_t - A y_{t-1}
  std::vector<Vector> err;    // x_t - y_t
  std::vector<Vector> alpha;  // r-vectors
  std::vector<Vector> beta;   // r-vectors
  std::vector<Vector> v;      // r-vectors of channel noise
  double empirical_mse = 0.0;
};

/// Throws kDimensionMismatch when the trajectory does not match the scheme.
ChannelRun run_awgn_channel(const RealizationScheme& scheme, const GaussMarkovSource& src,
                            const Trajectory& traj, std::uint64_t seed);

}  // namespace zdrd
