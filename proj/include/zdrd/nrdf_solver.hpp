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

#include <string_view>

#include "zdrd/maxdet.hpp"
#include "zdrd/source_model.hpp"

namespace zdrd {

/// Which semidefinite representation produced a solution.
///  - kFormB: requires B B^T nonsingular; variable Q (p x p) bounded through
///    the Schur block [[Pi - Q, Pi A^T], [A Pi, Lambda]].
///  - kFormA: requires A nonsingular; variable Q (q x q) bounded through
///    [[I - Q, B^T], [B, Lambda]].
///  - kScalarClosedForm: p = 1, rate = max(0, 1/2 log2(a^2 + sigma^2 / D)).
enum class SdpForm { kFormB, kFormA, kScalarClosedForm };

std::string_view form_name(SdpForm form);

struct NrdfSolution {
  double distortion_target = 0.0;
  double rate_bits = 0.0;  // bits per vector per time step
  Matrix pi;               // steady-state error covariance
  Matrix lambda;           // steady-state prediction covariance, A pi A^T + B B^T
  double kkt_residual = 0.0;
  SdpForm form_used = SdpForm::kFormB;
};

struct SolverOptions {
  maxdet::Options barrier;
  // Relative singular-value threshold for the full-rank tests on A and B.
  double rank_tolerance = 1e-10;
  // Forces a particular representation; otherwise FormB is preferred.
  std::optional<SdpForm> force_form;
};

/// Raw output of one max-det solve.
struct MaxdetSolution {
  Matrix pi;
  Matrix q;
  double kkt_residual = 0.0;  // duality-gap bound, bits
  double objective_bits = 0.0;
  int newton_steps = 0;
};

/// Closed-form scalar AR(1) rate in bits, max(0, 1/2 log2(alpha^2 + sigma2 / D)).
double scalar_ar1_nrdf(double alpha, double sigma2, double distortion);

/// True when src satisfies the preconditions of the given representation.
bool form_applicable(const GaussMarkovSource& src, SdpForm form, double rank_tolerance = 1e-10);

/// Solves one of the two max-det representations at distortion D. Throws
/// kInfeasibleModel if the form's precondition fails or no strictly feasible
/// point exists, kSolverDivergence if the barrier iteration does not converge.
MaxdetSolution solve_maxdet(const GaussMarkovSource& src, double distortion, SdpForm form,
                            const SolverOptions& options = {});

/// Asymptotic Gaussian nonanticipative rate-distortion function and its
/// optimizing covariance pair.
NrdfSolution nrdf(const GaussMarkovSource& src, double distortion,
                  const SolverOptions& options = {});

}  // namespace zdrd
