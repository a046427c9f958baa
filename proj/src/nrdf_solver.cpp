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

#include "zdrd/nrdf_solver.hpp"

#include <cmath>
#include <numbers>

#include "zdrd/errors.hpp"

namespace zdrd {

std::string_view form_name(SdpForm form) {
  switch (form) {
    case SdpForm::kFormB: return "FormB";
    case SdpForm::kFormA: return "FormA";
    case SdpForm::kScalarClosedForm: return "ScalarClosedForm";
  }
  return "Unknown";
}

double scalar_ar1_nrdf(double alpha, double sigma2, double distortion) {
  if (!(distortion > 0.0)) throw Error(ErrorCode::kBadDistortion, "distortion must be positive");
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise variance must be positive");
  if (std::isinf(distortion)) return std::max(0.0, std::log2(std::abs(alpha)));
  return std::max(0.0, 0.5 * std::log2(alpha * alpha + sigma2 / distortion));
}

bool form_applicable(const GaussMarkovSource& src, SdpForm form, double rank_tolerance) {
  switch (form) {
    case SdpForm::kFormB: return linalg::full_rank_rows(src.b(), rank_tolerance);
    case SdpForm::kFormA: return linalg::rank(src.a(), rank_tolerance) == src.state_dim();
    case SdpForm::kScalarClosedForm: return src.state_dim() == 1;
  }
  return false;
}

namespace {

// Basis of the symmetric n x n matrices matching half-vectorization order
// (i <= j, column by column).
std::vector<Matrix> symmetric_basis(Index n) {
  std::vector<Matrix> basis;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

Vector half_vec(const Matrix& m) {
  const Index n = m.rows();
  Vector v(n * (n + 1) / 2);
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) v(k++) = m(i, j);
  }
  return v;
}

Matrix from_half_vec(const Vector& v, Index n) {
  Matrix m(n, n);
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      m(i, j) = v(k);
      m(j, i) = v(k);
      ++k;
    }
  }
  return m;
}

// Variable layout: x = [vech(Pi), vech(Q)].
struct Program {
  Index p = 0;
  Index q_dim = 0;
  Index n_pi = 0;
  Index n_q = 0;
  std::vector<maxdet::AffineSymmetric> pi_constraints;  // Pi > 0, Lambda - Pi > 0, D - tr Pi > 0
  maxdet::Problem full;
};

Program build_program(const GaussMarkovSource& src, double distortion, SdpForm form) {
  const Matrix& a = src.a();
  const Matrix& w = src.noise_covariance();
  const Index p = src.state_dim();
  const Index qd = form == SdpForm::kFormA ? src.noise_dim() : p;

  Program prog;
  prog.p = p;
  prog.q_dim = qd;
  prog.n_pi = p * (p + 1) / 2;
  prog.n_q = qd * (qd + 1) / 2;
  const Index n = prog.n_pi + prog.n_q;
  const auto pi_basis = symmetric_basis(p);
  const auto q_basis = symmetric_basis(qd);

  auto pi_only = [&](Index size) {
    maxdet::AffineSymmetric block;
    block.constant = Matrix::Zero(size, size);
    block.coefficients.assign(static_cast<std::size_t>(prog.n_pi), Matrix());
    return block;
  };

  maxdet::AffineSymmetric pi_pd = pi_only(p);
  maxdet::AffineSymmetric gap = pi_only(p);
  maxdet::AffineSymmetric trace = pi_only(1);
  gap.constant = w;
  trace.constant(0, 0) = distortion;
  for (Index k = 0; k < prog.n_pi; ++k) {
    const Matrix& e = pi_basis[static_cast<std::size_t>(k)];
    const auto ks = static_cast<std::size_t>(k);
    pi_pd.coefficients[ks] = e;
    gap.coefficients[ks] = a * e * a.transpose() - e;
    trace.coefficients[ks] = Matrix::Constant(1, 1, -e.trace());
  }
  prog.pi_constraints = {pi_pd, gap, trace};

  // Extend the Pi-only blocks with zero Q coefficients.
  for (auto block : prog.pi_constraints) {
    block.coefficients.resize(static_cast<std::size_t>(n), Matrix());
    prog.full.constraints.push_back(std::move(block));
  }

  maxdet::AffineSymmetric schur;
  const Index top = form == SdpForm::kFormA ? qd : p;
  const Index size = top + p;
  schur.constant = Matrix::Zero(size, size);
  schur.coefficients.assign(static_cast<std::size_t>(n), Matrix());
  if (form == SdpForm::kFormA) {
    schur.constant.topLeftCorner(qd, qd).setIdentity();
    schur.constant.topRightCorner(qd, p) = src.b().transpose();
    schur.constant.bottomLeftCorner(p, qd) = src.b();
    schur.constant.bottomRightCorner(p, p) = w;
    for (Index k = 0; k < prog.n_pi; ++k) {
      Matrix c = Matrix::Zero(size, size);
      c.bottomRightCorner(p, p) = a * pi_basis[static_cast<std::size_t>(k)] * a.transpose();
      schur.coefficients[static_cast<std::size_t>(k)] = std::move(c);
    }
  } else {
    schur.constant.bottomRightCorner(p, p) = w;
    for (Index k = 0; k < prog.n_pi; ++k) {
      const Matrix& e = pi_basis[static_cast<std::size_t>(k)];
      Matrix c(size, size);
      c << e, e * a.transpose(), a * e, a * e * a.transpose();
      schur.coefficients[static_cast<std::size_t>(k)] = std::move(c);
    }
  }
  for (Index k = 0; k < prog.n_q; ++k) {
    Matrix c = Matrix::Zero(size, size);
    c.topLeftCorner(qd, qd) = -q_basis[static_cast<std::size_t>(k)];
    schur.coefficients[static_cast<std::size_t>(prog.n_pi + k)] = std::move(c);
  }
  prog.full.constraints.push_back(std::move(schur));

  maxdet::AffineSymmetric logdet;
  logdet.constant = Matrix::Zero(qd, qd);
  logdet.coefficients.assign(static_cast<std::size_t>(n), Matrix());
  for (Index k = 0; k < prog.n_q; ++k) {
    logdet.coefficients[static_cast<std::size_t>(prog.n_pi + k)] =
        q_basis[static_cast<std::size_t>(k)];
  }
  prog.full.logdet = std::move(logdet);
  prog.full.num_vars = n;
  return prog;
}

// Upper LMI bound on Q at a given Pi.
Matrix q_upper_bound(const GaussMarkovSource& src, const Matrix& pi, SdpForm form) {
  const Matrix lambda = src.a() * pi * src.a().transpose() + src.noise_covariance();
  const Eigen::LDLT<Matrix> ldlt(lambda);
  if (form == SdpForm::kFormA) {
    const Index q = src.noise_dim();
    return linalg::symmetrize(Matrix::Identity(q, q) -
                              src.b().transpose() * ldlt.solve(src.b()));
  }
  const Matrix api = src.a() * pi;
  return linalg::symmetrize(pi - api.transpose() * ldlt.solve(api));
}

Vector initial_pi(const GaussMarkovSource& src, double distortion, const Program& prog) {
  const Index p = src.state_dim();
  std::vector<Matrix> candidates;
  candidates.push_back(Matrix::Identity(p, p) * (0.5 * distortion / static_cast<double>(p)));
  if (const auto sigma = stationary_covariance(src)) {
    const double scale = std::min(0.9, 0.5 * distortion / sigma->trace());
    candidates.push_back(scale * *sigma);
  }
  for (const Matrix& c : candidates) {
    const Vector x = half_vec(c);
    if (maxdet::strictly_feasible(prog.pi_constraints, x)) return x;
  }
  const auto found = maxdet::find_strictly_feasible(prog.pi_constraints, prog.n_pi,
                                                    half_vec(candidates.front()));
  if (!found) {
    throw Error(ErrorCode::kInfeasibleModel,
                "no strictly feasible covariance with 0 < Pi <= Lambda and tr(Pi) < D");
  }
  return *found;
}

double rate_bits_from(const Matrix& pi, const Matrix& lambda) {
  const auto ld_lambda = linalg::log_det_pd(lambda);
  const auto ld_pi = linalg::log_det_pd(pi);
  if (!ld_lambda || !ld_pi) throw Error(ErrorCode::kNotPd, "solution covariance lost definiteness");
  return 0.5 * (*ld_lambda - *ld_pi) / std::numbers::ln2;
}

void check_distortion(double distortion) {
  if (!(distortion > 0.0) || !std::isfinite(distortion)) {
    throw Error(ErrorCode::kBadDistortion, "distortion must be positive and finite");
  }
}

}  // namespace

MaxdetSolution solve_maxdet(const GaussMarkovSource& src, double distortion, SdpForm form,
                            const SolverOptions& options) {
  check_distortion(distortion);
  if (form == SdpForm::kScalarClosedForm) {
    throw Error(ErrorCode::kInvalidArgument, "closed form is not a max-det representation");
  }
  if (!form_applicable(src, form, options.rank_tolerance)) {
    throw Error(ErrorCode::kInfeasibleModel,
                form == SdpForm::kFormB ? "FormB requires B to have full row rank"
                                        : "FormA requires A to be nonsingular");
  }
  const Program prog = build_program(src, distortion, form);

  const Vector pi0 = initial_pi(src, distortion, prog);
  const Matrix q_bound = q_upper_bound(src, from_half_vec(pi0, prog.p), form);
  Vector x0(prog.full.num_vars);
  x0.head(prog.n_pi) = pi0;
  x0.tail(prog.n_q) = half_vec(0.99 * q_bound);

  const maxdet::Result res = maxdet::solve(prog.full, x0, options.barrier);

  MaxdetSolution out;
  out.pi = from_half_vec(res.x.head(prog.n_pi), prog.p);
  out.q = from_half_vec(res.x.tail(prog.n_q), prog.q_dim);
  // -log det Q is twice the rate in nats, so the gap on the rate is half.
  out.kkt_residual = 0.5 * res.gap / std::numbers::ln2;
  out.newton_steps = res.newton_steps;
  const double constant =
      form == SdpForm::kFormB
          ? 0.5 * linalg::log_det_pd(src.noise_covariance()).value_or(0.0)
          : std::log(std::abs(src.a().determinant()));
  out.objective_bits = (0.5 * res.objective + constant) / std::numbers::ln2;

  for (const auto& block : prog.full.constraints) {
    if (linalg::min_eigenvalue(block.evaluate(res.x)) < -1e-8) {
      throw Error(ErrorCode::kSolverDivergence, "solution violates an LMI constraint");
    }
  }
  if (out.kkt_residual > 1e-6 ||
      res.final_objective_change > 1e-8 * std::max(1.0, std::abs(res.objective))) {
    throw Error(ErrorCode::kSolverDivergence, "barrier iteration did not reach tolerance");
  }
  return out;
}

NrdfSolution nrdf(const GaussMarkovSource& src, double distortion, const SolverOptions& options) {
  check_distortion(distortion);
  const Index p = src.state_dim();
  const Matrix& w = src.noise_covariance();

  NrdfSolution sol;
  sol.distortion_target = distortion;

  const std::optional<Matrix> sigma = stationary_covariance(src);
  if (p == 1 && !options.force_form) {
    const double alpha = src.a()(0, 0);
    const double sigma2 = w(0, 0);
    if (!(sigma2 > 0.0)) {
      throw Error(ErrorCode::kInfeasibleModel, "scalar source has no driving noise");
    }
    const double pi = sigma ? std::min(distortion, (*sigma)(0, 0)) : distortion;
    sol.pi = Matrix::Constant(1, 1, pi);
    sol.lambda = Matrix::Constant(1, 1, alpha * alpha * pi + sigma2);
    sol.rate_bits = std::max(0.0, 0.5 * std::log2(sol.lambda(0, 0) / pi));
    sol.form_used = SdpForm::kScalarClosedForm;
    return sol;
  }

  SdpForm form;
  if (options.force_form) {
    form = *options.force_form;
    if (!form_applicable(src, form, options.rank_tolerance)) {
      throw Error(ErrorCode::kInfeasibleModel, "requested representation is not applicable");
    }
  } else if (form_applicable(src, SdpForm::kFormB, options.rank_tolerance)) {
    form = SdpForm::kFormB;
  } else if (form_applicable(src, SdpForm::kFormA, options.rank_tolerance)) {
    form = SdpForm::kFormA;
  } else {
    throw Error(ErrorCode::kInfeasibleModel,
                "neither A is nonsingular nor B B^T is nonsingular");
  }
  sol.form_used = form;

  // Zero-rate regime: the stationary covariance itself is feasible.
  if (sigma && distortion >= sigma->trace()) {
    sol.pi = *sigma;
    sol.lambda = *sigma;
    sol.rate_bits = 0.0;
    sol.kkt_residual = 0.0;
    return sol;
  }

  const MaxdetSolution raw = solve_maxdet(src, distortion, form, options);
  sol.pi = raw.pi;
  sol.lambda = linalg::symmetrize(src.a() * raw.pi * src.a().transpose() + w);
  sol.rate_bits = std::max(0.0, rate_bits_from(sol.pi, sol.lambda));
  sol.kkt_residual = raw.kkt_residual;
  return sol;
}

}  // namespace zdrd
