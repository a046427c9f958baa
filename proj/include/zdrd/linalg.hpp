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

#include <Eigen/Dense>
#include <optional>

namespace zdrd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace linalg {

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Max absolute entry of m - m^T.
double symmetry_residual(const Matrix& m);

double min_eigenvalue(const Matrix& symmetric);

// Numerical rank with threshold rel_tol * largest singular value.
Index rank(const Matrix& m, double rel_tol = 1e-10);

inline bool full_rank_rows(const Matrix& m, double rel_tol = 1e-10) {
  return rank(m, rel_tol) == m.rows();
}

// log det of a symmetric positive definite matrix, nullopt if the Cholesky
// factorization fails.
std::optional<double> log_det_pd(const Matrix& m);

// Symmetric eigendecomposition sorted by descending eigenvalue. Each
// eigenvector (column) is signed so that its largest-magnitude component is
// positive.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};
SymmetricEigen sorted_eigen(const Matrix& symmetric);

// Symmetric square root (and inverse square root) of a PD matrix.
Matrix sqrt_pd(const Matrix& m);
Matrix inv_sqrt_pd(const Matrix& m);

// Solves Sigma = A Sigma A^T + W for stable A via the Kronecker system.
// Returns nullopt when I - A (x) A is singular to working precision.
std::optional<Matrix> solve_discrete_lyapunov(const Matrix& a, const Matrix& w);

}  // namespace linalg
}  // namespace zdrd
