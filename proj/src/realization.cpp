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

#include "zdrd/realization.hpp"

#include <cmath>

#include "zdrd/errors.hpp"
#include "zdrd/rng.hpp"

namespace zdrd {

namespace {

void require_pd(const Matrix& m, const char* name) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(name) + " must be square");
  }
  if (!m.allFinite() || linalg::min_eigenvalue(m) <= 0.0) {
    throw Error(ErrorCode::kNotPd, std::string(name) + " is not positive definite");
  }
}

}  // namespace

JointDiagonalization joint_diagonalize(const Matrix& pi, const Matrix& lambda) {
  require_pd(pi, "pi");
  require_pd(lambda, "lambda");
  if (lambda.rows() != pi.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "pi and lambda must have the same size");
  }

  const linalg::SymmetricEigen pi_eig = linalg::sorted_eigen(pi);
  const Matrix pi_inv_sqrt = linalg::inv_sqrt_pd(pi);
  const linalg::SymmetricEigen s_eig =
      linalg::sorted_eigen(linalg::symmetrize(pi_inv_sqrt * lambda * pi_inv_sqrt));
  const Matrix v = s_eig.vectors.transpose();

  JointDiagonalization out;
  out.pi_tilde = pi_eig.values;
  out.lambda_tilde = pi_eig.values.cwiseProduct(s_eig.values);
  const Vector scale = pi_eig.values.cwiseSqrt();
  out.e = scale.asDiagonal() * v * pi_inv_sqrt;
  out.e_inv = linalg::sqrt_pd(pi) * v.transpose() * scale.cwiseInverse().asDiagonal();
  return out;
}

WaterfillFactors waterfill_factors(const Vector& pi_tilde, const Vector& lambda_tilde,
                                   double tol) {
  if (pi_tilde.size() != lambda_tilde.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "pi_tilde and lambda_tilde differ in length");
  }
  const Index p = pi_tilde.size();
  WaterfillFactors out;
  out.h_tilde = Vector::Zero(p);
  out.theta = Vector::Zero(p);
  out.phi = Vector::Zero(p);
  out.active.assign(static_cast<std::size_t>(p), false);
  for (Index i = 0; i < p; ++i) {
    const double mp = pi_tilde(i);
    const double ml = lambda_tilde(i);
    if (!(mp > 0.0) || !(ml > 0.0)) {
      throw Error(ErrorCode::kNotPd, "diagonal entries must be positive");
    }
    if (mp > ml + tol) {
      throw Error(ErrorCode::kOrderViolation,
                  "pi_tilde[" + std::to_string(i) + "] exceeds lambda_tilde");
    }
    const double h = 1.0 - mp / ml;
    if (h > tol) {
      out.h_tilde(i) = h;
      out.theta(i) = std::sqrt(mp * h);
      out.phi(i) = std::sqrt(h / mp);
      out.active[static_cast<std::size_t>(i)] = true;
      ++out.r;
    }
  }
  return out;
}

std::vector<Index> RealizationScheme::active_indices() const {
  std::vector<Index> idx;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i]) idx.push_back(static_cast<Index>(i));
  }
  return idx;
}

RealizationScheme build_realization(const GaussMarkovSource& src, const NrdfSolution& sol,
                                    double tol) {
  const Index p = src.state_dim();
  if (sol.pi.rows() != p || sol.lambda.rows() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "solution does not match the source dimension");
  }
  const JointDiagonalization jd = joint_diagonalize(sol.pi, sol.lambda);
  const WaterfillFactors wf = waterfill_factors(jd.pi_tilde, jd.lambda_tilde, tol);

  RealizationScheme s;
  s.a = src.a();
  s.e = jd.e;
  s.e_inv = jd.e_inv;
  s.pi_tilde = jd.pi_tilde;
  s.lambda_tilde = jd.lambda_tilde;
  s.h_tilde = wf.h_tilde;
  s.theta = wf.theta;
  s.phi = wf.phi;
  s.active = wf.active;
  s.r = wf.r;
  s.h = Matrix::Identity(p, p) - sol.pi * sol.lambda.inverse();
  s.sigma_v = sol.pi * s.h.transpose();
  return s;
}

ChannelRun run_awgn_channel(const RealizationScheme& scheme, const GaussMarkovSource& src,
                            const Trajectory& traj, std::uint64_t seed) {
  const Index p = scheme.dim();
  if (src.state_dim() != p || traj.samples.empty() || traj.samples.front().size() != p ||
      traj.noise.size() + 1 != traj.samples.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "trajectory does not match the scheme");
  }
  const std::vector<Index> act = scheme.active_indices();
  const auto r = static_cast<Index>(act.size());
  const std::size_t n = traj.samples.size();

  Rng rng(seed);
  ChannelRun run;
  run.x = traj.samples;
  run.y.reserve(n);
  run.k.reserve(n);
  run.err.reserve(n);
  run.alpha.reserve(n);
  run.beta.reserve(n);
  run.v.reserve(n);

  Vector e_prev = Vector::Zero(p);
  Vector full(p);
  double sq = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    // With y_{-1} = 0 the first innovation is x_0 itself.
    const Vector k = t == 0 ? traj.samples[0]
                            : Vector(scheme.a * e_prev + src.b() * traj.noise[t - 1]);
    const Vector ek = scheme.e * k;
    Vector alpha(r), beta(r), v(r);
    full.setZero();
    for (Index j = 0; j < r; ++j) {
      const Index i = act[static_cast<std::size_t>(j)];
      alpha(j) = scheme.phi(i) * ek(i);
      v(j) = rng.normal();
      beta(j) = alpha(j) + v(j);
      full(i) = scheme.theta(i) * beta(j);
    }
    const Vector k_hat = scheme.e_inv * full;
    const Vector e = k - k_hat;
    sq += e.squaredNorm();
    run.y.push_back(traj.samples[t] - e);
    run.k.push_back(k);
    run.err.push_back(e);
    run.alpha.push_back(std::move(alpha));
    run.beta.push_back(std::move(beta));
    run.v.push_back(std::move(v));
    e_prev = e;
  }
  run.empirical_mse = sq / static_cast<double>(n);
  return run;
}

}  // namespace zdrd
