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

#include "zdrd/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zdrd/errors.hpp"
#include "zdrd/rng.hpp"

namespace zdrd {

namespace {

std::string shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

GaussMarkovSource::GaussMarkovSource(Matrix a, Matrix b, Matrix sigma_x0)
    : a_(std::move(a)), b_(std::move(b)), sigma_x0_(std::move(sigma_x0)) {
  const Index p = a_.rows();
  if (p == 0 || a_.cols() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "A must be square and non-empty, got " + shape(a_));
  }
  if (b_.rows() != p || b_.cols() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "B must have " + std::to_string(p) + " rows, got " + shape(b_));
  }
  if (sigma_x0_.rows() != p || sigma_x0_.cols() != p) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sigma_x0 must be " + std::to_string(p) + "x" + std::to_string(p) +
                    ", got " + shape(sigma_x0_));
  }
  if (!all_finite(a_) || !all_finite(b_) || !all_finite(sigma_x0_)) {
    throw Error(ErrorCode::kInvalidArgument, "source matrices must be finite");
  }
  if (linalg::symmetry_residual(sigma_x0_) > 1e-12) {
    throw Error(ErrorCode::kNotPsd, "sigma_x0 is not symmetric");
  }
  if (linalg::min_eigenvalue(sigma_x0_) < -1e-10) {
    throw Error(ErrorCode::kNotPsd, "sigma_x0 has a negative eigenvalue");
  }
  noise_cov_ = linalg::symmetrize(b_ * b_.transpose());
}

GaussMarkovSource::GaussMarkovSource(Matrix a, Matrix b)
    : GaussMarkovSource(a, std::move(b), Matrix::Identity(a.rows(), a.rows())) {}

StabilityReport stability_report(const GaussMarkovSource& src) {
  Eigen::EigenSolver<Matrix> es(src.a(), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "eigenvalue iteration did not converge");
  }
  StabilityReport report;
  const auto& ev = es.eigenvalues();
  report.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::stable_sort(report.eigenvalues.begin(), report.eigenvalues.end(),
                   [](const std::complex<double>& x, const std::complex<double>& y) {
                     const double ax = std::abs(x);
                     const double ay = std::abs(y);
                     if (ax != ay) return ax > ay;
                     if (x.real() != y.real()) return x.real() > y.real();
                     return x.imag() > y.imag();
                   });
  for (const auto& mu : report.eigenvalues) {
    const double mag = std::abs(mu);
    if (mag >= 1.0) report.is_stable = false;
    if (mag > 1.0) report.rate_floor_bits += std::log2(mag);
  }
  return report;
}

GaussMarkovSource augment_ar(std::span<const Matrix> coefficients, const Matrix& b,
                             std::optional<Matrix> sigma_x0) {
  if (coefficients.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "AR order must be at least 1");
  }
  const Index p = coefficients.front().rows();
  for (const Matrix& aj : coefficients) {
    if (aj.rows() != p || aj.cols() != p) {
      throw Error(ErrorCode::kDimensionMismatch, "AR coefficient matrices must all be " +
                                                     std::to_string(p) + "x" +
                                                     std::to_string(p));
    }
  }
  if (b.rows() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "B must have " + std::to_string(p) + " rows");
  }
  const Index s = static_cast<Index>(coefficients.size());
  const Index q = b.cols();
  if (s == 1) {
    Matrix x0 = sigma_x0.value_or(Matrix::Identity(p, p));
    return GaussMarkovSource(coefficients.front(), b, std::move(x0));
  }

  Matrix a_aug = Matrix::Zero(s * p, s * p);
  for (Index j = 0; j < s; ++j) {
    a_aug.block(0, j * p, p, p) = coefficients[static_cast<std::size_t>(j)];
  }
  a_aug.block(p, 0, (s - 1) * p, (s - 1) * p).setIdentity();

  Matrix b_aug = Matrix::Zero(s * p, s * q);
  b_aug.block(0, 0, p, q) = b;

  Matrix x0 = sigma_x0.value_or(Matrix::Identity(s * p, s * p));
  return GaussMarkovSource(std::move(a_aug), std::move(b_aug), std::move(x0));
}

std::optional<Matrix> stationary_covariance(const GaussMarkovSource& src) {
  if (!stability_report(src).is_stable) return std::nullopt;
  return linalg::solve_discrete_lyapunov(src.a(), src.noise_covariance());
}

double d_max(const GaussMarkovSource& src) {
  const auto sigma = stationary_covariance(src);
  if (!sigma) return std::numeric_limits<double>::infinity();
  return sigma->trace();
}

Trajectory simulate(const GaussMarkovSource& src, std::int64_t n, std::uint64_t seed) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "trajectory length must be >= 0");
  const Index p = src.state_dim();
  const Index q = src.noise_dim();

  // sigma_x0 may be singular, so factor it through its eigendecomposition.
  const linalg::SymmetricEigen eig = linalg::sorted_eigen(src.sigma_x0());
  const Matrix x0_factor =
      eig.vectors * eig.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();

  Rng rng(seed);
  Trajectory traj;
  traj.seed = seed;
  traj.samples.reserve(static_cast<std::size_t>(n + 1));
  traj.noise.reserve(static_cast<std::size_t>(n));

  Vector z(p);
  for (Index i = 0; i < p; ++i) z(i) = rng.normal();
  traj.samples.push_back(x0_factor * z);

  Vector w(q);
  for (std::int64_t t = 0; t < n; ++t) {
    for (Index i = 0; i < q; ++i) w(i) = rng.normal();
    traj.samples.push_back(src.a() * traj.samples.back() + src.b() * w);
    traj.noise.push_back(w);
  }
  return traj;
}

}  // namespace zdrd
