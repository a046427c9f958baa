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

#include "zdrd/maxdet.hpp"

#include <cmath>
#include <limits>

#include "zdrd/errors.hpp"

namespace zdrd::maxdet {

Matrix AffineSymmetric::evaluate(const Vector& x) const {
  Matrix out = constant;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const double xi = x(static_cast<Index>(i));
    if (xi != 0.0 && coefficients[i].size() != 0) out.noalias() += xi * coefficients[i];
  }
  return out;
}

Index Problem::barrier_size() const {
  Index m = 0;
  for (const auto& block : constraints) m += block.size();
  return m;
}

namespace {

// A block of the barrier function, weighted: contributes -weight * log det F(x).
struct WeightedBlock {
  const AffineSymmetric* block;
  double weight;
  std::vector<Index> support;  // variables with non-zero coefficients
};

std::vector<Index> support_of(const AffineSymmetric& block) {
  std::vector<Index> support;
  for (std::size_t i = 0; i < block.coefficients.size(); ++i) {
    const Matrix& c = block.coefficients[i];
    if (c.size() != 0 && c.cwiseAbs().maxCoeff() > 0.0) support.push_back(static_cast<Index>(i));
  }
  return support;
}

struct Evaluation {
  bool feasible = false;
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

// Barrier objective t * c^T x + sum_k -w_k log det F_k(x) with optional
// derivatives. Per block, with F = L L^T and M_i = L^{-1} F_i L^{-T}:
//   d/dx_i  = -w tr(M_i),   d2/dx_i dx_j = w <M_i, M_j>.
Evaluation evaluate(const std::vector<WeightedBlock>& blocks, const Vector& linear, double t,
                    const Vector& x, bool derivatives) {
  const Index n = x.size();
  Evaluation ev;
  if (derivatives) {
    ev.grad = Vector::Zero(n);
    ev.hess = Matrix::Zero(n, n);
  }
  if (linear.size() == n) {
    ev.value += t * linear.dot(x);
    if (derivatives) ev.grad += t * linear;
  }
  for (const auto& wb : blocks) {
    const Matrix f = wb.block->evaluate(x);
    Eigen::LLT<Matrix> llt(f);
    if (llt.info() != Eigen::Success) return ev;
    const Matrix l = llt.matrixL();
    const Vector diag = l.diagonal();
    if ((diag.array() <= 0.0).any() || !diag.allFinite()) return ev;
    ev.value -= wb.weight * 2.0 * diag.array().log().sum();
    if (!derivatives) continue;

    std::vector<Matrix> m(wb.support.size());
    for (std::size_t a = 0; a < wb.support.size(); ++a) {
      const Matrix& fi = wb.block->coefficients[static_cast<std::size_t>(wb.support[a])];
      const Matrix y = l.triangularView<Eigen::Lower>().solve(fi);
      m[a] = l.triangularView<Eigen::Lower>().solve(y.transpose());
      ev.grad(wb.support[a]) -= wb.weight * m[a].trace();
    }
    for (std::size_t a = 0; a < wb.support.size(); ++a) {
      for (std::size_t b = a; b < wb.support.size(); ++b) {
        const double h = wb.weight * m[a].cwiseProduct(m[b]).sum();
        ev.hess(wb.support[a], wb.support[b]) += h;
        if (a != b) ev.hess(wb.support[b], wb.support[a]) += h;
      }
    }
  }
  ev.feasible = std::isfinite(ev.value);
  return ev;
}

struct CenteringOutcome {
  int steps = 0;
  bool converged = false;
};

// Damped Newton on the barrier objective at fixed t.
CenteringOutcome center(const std::vector<WeightedBlock>& blocks, const Vector& linear, double t,
                        Vector& x, const Options& options) {
  CenteringOutcome out;
  for (int it = 0; it < options.max_inner; ++it) {
    const Evaluation ev = evaluate(blocks, linear, t, x, true);
    if (!ev.feasible) return out;

    Eigen::LDLT<Matrix> ldlt(ev.hess);
    Vector dx = ldlt.solve(-ev.grad);
    if (ldlt.info() != Eigen::Success || !dx.allFinite()) {
      const double jitter = 1e-12 * (1.0 + ev.hess.diagonal().cwiseAbs().maxCoeff());
      Matrix reg = ev.hess;
      reg.diagonal().array() += jitter;
      dx = reg.ldlt().solve(-ev.grad);
      if (!dx.allFinite()) return out;
    }
    const double decrement2 = -ev.grad.dot(dx);
    if (!(decrement2 >= 0.0) || 0.5 * decrement2 <= options.newton_tolerance) {
      out.converged = true;
      return out;
    }

    double step = 1.0;
    bool accepted = false;
    double decrease = 0.0;
    while (step > 1e-16) {
      const Vector trial = x + step * dx;
      const Evaluation te = evaluate(blocks, linear, t, trial, false);
      if (te.feasible && te.value <= ev.value - 0.25 * step * decrement2) {
        x = trial;
        accepted = true;
        decrease = ev.value - te.value;
        break;
      }
      step *= 0.5;
    }
    ++out.steps;
    // Once the remaining decrease is below the resolution of the barrier
    // value, the point is as centered as floating point allows.
    const double resolution = 64.0 * std::numeric_limits<double>::epsilon() *
                              std::max(1.0, std::abs(ev.value));
    if (decrease <= resolution && decrement2 < std::max(1e-6, resolution)) {
      out.converged = true;
      return out;
    }
    if (!accepted) return out;
  }
  return out;
}

std::vector<WeightedBlock> weighted_blocks(const Problem& problem, double t) {
  std::vector<WeightedBlock> blocks;
  if (problem.logdet) blocks.push_back({&*problem.logdet, t, support_of(*problem.logdet)});
  for (const auto& c : problem.constraints) blocks.push_back({&c, 1.0, support_of(c)});
  return blocks;
}

}  // namespace

bool strictly_feasible(const std::vector<AffineSymmetric>& constraints, const Vector& x) {
  for (const auto& block : constraints) {
    if (!linalg::log_det_pd(block.evaluate(x))) return false;
  }
  return true;
}

std::optional<double> objective(const Problem& problem, const Vector& x) {
  double value = 0.0;
  if (problem.linear_cost.size() == x.size()) value += problem.linear_cost.dot(x);
  if (problem.logdet) {
    const auto ld = linalg::log_det_pd(problem.logdet->evaluate(x));
    if (!ld) return std::nullopt;
    value -= *ld;
  }
  return value;
}

Result solve(const Problem& problem, const Vector& x0, const Options& options) {
  if (x0.size() != problem.num_vars) {
    throw Error(ErrorCode::kDimensionMismatch, "initial point has wrong dimension");
  }
  if (!strictly_feasible(problem.constraints, x0) || !objective(problem, x0)) {
    throw Error(ErrorCode::kInfeasibleModel, "initial point is not strictly feasible");
  }
  const double m = static_cast<double>(problem.barrier_size());

  Result result;
  result.x = x0;
  double t = options.initial_t;
  double previous = *objective(problem, x0);
  std::optional<Result> last_centered;
  int stalled = 0;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    const auto blocks = weighted_blocks(problem, t);
    const CenteringOutcome c = center(blocks, problem.linear_cost, t, result.x, options);
    result.newton_steps += c.steps;
    result.outer_iterations = outer + 1;
    const double current = *objective(problem, result.x);
    result.final_objective_change = std::abs(current - previous);
    previous = current;
    result.gap = m / t;
    result.objective = current;
    if (c.converged) {
      stalled = 0;
      last_centered = result;
    } else {
      // Centering has hit the floating-point floor; keep the last centered
      // point if it is already accurate enough.
      if (last_centered && last_centered->gap <= options.acceptable_gap) {
        Result fallback = *last_centered;
        fallback.newton_steps = result.newton_steps;
        fallback.outer_iterations = result.outer_iterations;
        return fallback;
      }
      if (++stalled > 3) {
        throw Error(ErrorCode::kSolverDivergence, "Newton centering failed repeatedly");
      }
    }
    if (c.converged && result.gap <= options.gap_tolerance) return result;
    t /= options.mu_factor;
  }
  throw Error(ErrorCode::kSolverDivergence, "barrier method hit the outer iteration cap");
}

std::optional<Vector> find_strictly_feasible(const std::vector<AffineSymmetric>& constraints,
                                             Index num_vars, const Vector& x0,
                                             const Options& options) {
  if (strictly_feasible(constraints, x0)) return x0;

  // Lift to (x, s) with every block shifted by s I.
  Problem lifted;
  lifted.num_vars = num_vars + 1;
  lifted.linear_cost = Vector::Zero(num_vars + 1);
  lifted.linear_cost(num_vars) = 1.0;
  double worst = 0.0;
  for (const auto& block : constraints) {
    AffineSymmetric shifted = block;
    shifted.coefficients.resize(static_cast<std::size_t>(num_vars));
    for (auto& c : shifted.coefficients) {
      if (c.size() == 0) c = Matrix::Zero(block.size(), block.size());
    }
    shifted.coefficients.push_back(Matrix::Identity(block.size(), block.size()));
    worst = std::max(worst, -linalg::min_eigenvalue(block.evaluate(x0)));
    lifted.constraints.push_back(std::move(shifted));
  }
  Vector z(num_vars + 1);
  z.head(num_vars) = x0;
  z(num_vars) = worst + 1.0;

  const double m = static_cast<double>(lifted.barrier_size());
  double t = options.initial_t;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    const auto blocks = weighted_blocks(lifted, t);
    center(blocks, lifted.linear_cost, t, z, options);
    if (z(num_vars) < 0.0) {
      Vector x = z.head(num_vars);
      if (strictly_feasible(constraints, x)) return x;
    }
    if (m / t <= options.gap_tolerance * (1.0 + std::abs(z(num_vars)))) return std::nullopt;
    t /= options.mu_factor;
  }
  return std::nullopt;
}

}  // namespace zdrd::maxdet
