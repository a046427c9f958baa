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

#include "zdrd/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "zdrd/errors.hpp"

namespace zdrd::linalg {

double symmetry_residual(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(symmetric),
                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "symmetric eigensolver did not converge");
  }
  return es.eigenvalues().minCoeff();
}

Index rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double threshold = rel_tol * s(0);
  return static_cast<Index>((s.array() > threshold).count());
}

std::optional<double> log_det_pd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Vector diag = llt.matrixL().toDenseMatrix().diagonal();
  if ((diag.array() <= 0.0).any()) return std::nullopt;
  return 2.0 * diag.array().log().sum();
}

SymmetricEigen sorted_eigen(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(symmetric));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "symmetric eigensolver did not converge");
  }
  const Index n = symmetric.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });

  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = es.eigenvalues()(src);
    Vector v = es.eigenvectors().col(src);
    Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.vectors.col(k) = v;
  }
  return out;
}

Matrix sqrt_pd(const Matrix& m) {
  const SymmetricEigen eig = sorted_eigen(m);
  if (eig.values.size() > 0 && eig.values.minCoeff() <= 0.0) {
    throw Error(ErrorCode::kNotPd, "matrix square root requires a PD matrix");
  }
  return eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.transpose();
}

Matrix inv_sqrt_pd(const Matrix& m) {
  const SymmetricEigen eig = sorted_eigen(m);
  if (eig.values.size() > 0 && eig.values.minCoeff() <= 0.0) {
    throw Error(ErrorCode::kNotPd, "inverse square root requires a PD matrix");
  }
  return eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.vectors.transpose();
}

std::optional<Matrix> solve_discrete_lyapunov(const Matrix& a, const Matrix& w) {
  const Index p = a.rows();
  const Index n = p * p;
  // vec(A X A^T) = (A (x) A) vec(X), column-major vec.
  Matrix system = Matrix::Identity(n, n);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      system.block(i * p, j * p, p, p) -= a(i, j) * a;
    }
  }
  Eigen::FullPivLU<Matrix> lu(system);
  if (!lu.isInvertible()) return std::nullopt;
  const Vector rhs = Eigen::Map<const Vector>(w.data(), n);
  const Vector sol = lu.solve(rhs);
  Matrix sigma = Eigen::Map<const Matrix>(sol.data(), p, p);
  return symmetrize(sigma);
}

}  // namespace zdrd::linalg
