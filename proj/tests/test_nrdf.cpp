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

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "zdrd/errors.hpp"
#include "zdrd/nrdf_solver.hpp"
#include "zdrd/rd_curve.hpp"

using namespace zdrd;
using zdrd::testing::preset_source;
using zdrd::testing::scalar_source;

namespace {

// Random A scaled to spectral radius `radius`, with B = I.
GaussMarkovSource random_source(std::mt19937_64& gen, Index p, double radius) {
  std::normal_distribution<double> n01;
  Matrix a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = n01(gen);
  const double rho = a.eigenvalues().cwiseAbs().maxCoeff();
  return GaussMarkovSource(a * (radius / rho), Matrix::Identity(p, p));
}

double rate_at(const GaussMarkovSource& src, const Matrix& pi) {
  const Matrix lambda = src.a() * pi * src.a().transpose() + src.noise_covariance();
  return 0.5 * std::log2(lambda.determinant() / pi.determinant());
}

bool feasible_2x2(const GaussMarkovSource& src, double a, double b, double c, double d) {
  if (a <= 0.0 || c <= 0.0 || a * c - b * b <= 0.0 || a + c > d) return false;
  Matrix pi(2, 2);
  pi << a, b, b, c;
  const Matrix lambda = src.a() * pi * src.a().transpose() + src.noise_covariance();
  return (lambda - pi).selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() >= 0.0;
}

// Random search over symmetric PD 2x2 Pi with tr(Pi) <= d, then shrinking
// local perturbations around the incumbent.
double brute_force_rate_2x2(const GaussMarkovSource& src, double d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double best = INFINITY;
  double ba = 0.0, bb = 0.0, bc = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double a = d * u(gen);
    const double c = (d - a) * u(gen);
    const double lim = std::sqrt(a * c);
    const double b = lim * (2.0 * u(gen) - 1.0);
    if (!feasible_2x2(src, a, b, c, d)) continue;
    Matrix pi(2, 2);
    pi << a, b, b, c;
    const double r = rate_at(src, pi);
    if (r < best) {
      best = r;
      ba = a, bb = b, bc = c;
    }
  }
  std::normal_distribution<double> n01;
  for (double step = 0.05 * d; step > 1e-9; step *= 0.7) {
    for (int i = 0; i < 2000; ++i) {
      const double a = ba + step * n01(gen);
      const double b = bb + step * n01(gen);
      const double c = bc + step * n01(gen);
      if (!feasible_2x2(src, a, b, c, d)) continue;
      Matrix pi(2, 2);
      pi << a, b, b, c;
      const double r = rate_at(src, pi);
      if (r < best) {
        best = r;
        ba = a, bb = b, bc = c;
      }
    }
  }
  return best;
}

SolverOptions forced(SdpForm form) {
  SolverOptions o;
  o.force_form = form;
  return o;
}

}  // namespace

TEST_CASE("scalar closed form") {
  CHECK(scalar_ar1_nrdf(0.5, 1.0, 0.5) == doctest::Approx(0.5 * std::log2(2.25)).epsilon(1e-14));
  CHECK(scalar_ar1_nrdf(0.5, 1.0, 0.5) == doctest::Approx(0.5850).epsilon(1e-4));
  CHECK(scalar_ar1_nrdf(0.0, 1.0, 1.0) == 0.0);
  CHECK(scalar_ar1_nrdf(1.2, 1.0, 1e12) == doctest::Approx(std::log2(1.2)).epsilon(1e-9));
  CHECK(std::log2(1.2) == doctest::Approx(0.2630).epsilon(1e-3));
}

TEST_CASE("scalar source through the max-det path") {
  const GaussMarkovSource src = scalar_source(0.5);
  const NrdfSolution sol = nrdf(src, 0.5, forced(SdpForm::kFormB));
  CHECK(sol.form_used == SdpForm::kFormB);
  CHECK(sol.rate_bits == doctest::Approx(0.5 * std::log2(2.25)).epsilon(1e-8));
  CHECK(sol.pi(0, 0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(sol.lambda(0, 0) == doctest::Approx(1.125).epsilon(1e-8));

  const NrdfSolution closed = nrdf(src, 0.5);
  CHECK(closed.form_used == SdpForm::kScalarClosedForm);
  CHECK(closed.rate_bits == doctest::Approx(sol.rate_bits).epsilon(1e-8));
}

TEST_CASE("max-det path agrees with the closed form on random scalar sources") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> alpha_d(-1.5, 1.5), sigma_d(0.1, 4.0), u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double alpha = alpha_d(gen);
    const double sigma2 = sigma_d(gen);
    const double dmax = std::abs(alpha) < 1.0 ? sigma2 / (1.0 - alpha * alpha) : 20.0;
    const double d = 2.0 * std::max(1.0, dmax) * (1e-3 + (1.0 - 1e-3) * u(gen));
    const NrdfSolution sol = nrdf(scalar_source(alpha, sigma2), d, forced(SdpForm::kFormB));
    CHECK(std::abs(sol.rate_bits - scalar_ar1_nrdf(alpha, sigma2, d)) <= 1e-8);
  }
}

TEST_CASE("zero-rate boundary of a stable scalar source") {
  const GaussMarkovSource src = scalar_source(0.3);
  const NrdfSolution sol = nrdf(src, 1.0 / (1.0 - 0.09), forced(SdpForm::kFormB));
  CHECK(sol.rate_bits <= 1e-6);
  CHECK(sol.pi(0, 0) == doctest::Approx(sol.lambda(0, 0)).epsilon(1e-6));
}

TEST_CASE("p = 2 solution matches a brute-force search") {
  std::mt19937_64 gen(21);
  const GaussMarkovSource src = random_source(gen, 2, 0.8);
  const NrdfSolution sol = nrdf(src, 0.3);
  const double oracle = brute_force_rate_2x2(src, 0.3, 99);
  CHECK(std::abs(sol.rate_bits - oracle) <= 1e-3);
  // The solver is never worse than any feasible point.
  CHECK(sol.rate_bits <= oracle + 1e-9);
}

TEST_CASE("solution satisfies the structural invariants") {
  for (const char* name : {"example1", "example2", "example3", "example4"}) {
    const GaussMarkovSource src = preset_source(name);
    for (double d : {0.2, 1.0, 2.5}) {
      const NrdfSolution sol = nrdf(src, d);
      const Matrix lambda = src.a() * sol.pi * src.a().transpose() + src.noise_covariance();
      CHECK((sol.lambda - lambda).norm() <= 1e-8 * lambda.norm());
      CHECK(sol.pi.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() > 0.0);
      const Matrix slack = sol.lambda - sol.pi;
      CHECK(slack.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() >= -1e-8);
      CHECK(sol.pi.trace() <= d + 1e-8);
      CHECK(sol.rate_bits == doctest::Approx(rate_at(src, sol.pi)).epsilon(1e-8));
    }
  }
}

TEST_CASE("FormA and FormB agree when both apply") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> radius(0.3, 1.4), u(0.05, 1.0);
  for (int i = 0; i < 10; ++i) {
    const Index p = i % 2 == 0 ? 2 : 3;
    const GaussMarkovSource src = random_source(gen, p, radius(gen));
    const auto sigma = stationary_covariance(src);
    const double top = sigma ? sigma->trace() : 3.0 * p;
    const double d = top * u(gen);
    const NrdfSolution b = nrdf(src, d, forced(SdpForm::kFormB));
    const NrdfSolution a = nrdf(src, d, forced(SdpForm::kFormA));
    CHECK(std::abs(a.rate_bits - b.rate_bits) <= 1e-6);
  }
  const GaussMarkovSource ex3 = preset_source("example3");
  const NrdfSolution b = nrdf(ex3, 1.0, forced(SdpForm::kFormB));
  const NrdfSolution a = nrdf(ex3, 1.0, forced(SdpForm::kFormA));
  CHECK(std::abs(a.rate_bits - b.rate_bits) <= 1e-6);
}

TEST_CASE("singular B selects FormA") {
  const GaussMarkovSource ex4 = preset_source("example4");
  CHECK_FALSE(form_applicable(ex4, SdpForm::kFormB));
  CHECK(form_applicable(ex4, SdpForm::kFormA));
  try {
    nrdf(ex4, 1.0, forced(SdpForm::kFormB));
    FAIL("expected InfeasibleModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasibleModel);
  }
  CHECK(nrdf(ex4, 1.0).form_used == SdpForm::kFormA);

  const GaussMarkovSource neither(Matrix::Zero(2, 2), (Matrix(2, 1) << 1.0, 0.0).finished());
  try {
    nrdf(neither, 1.0);
    FAIL("expected InfeasibleModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasibleModel);
  }
}

TEST_CASE("bad distortion") {
  for (double d : std::vector<double>{0.0, -1.0, NAN}) {
    try {
      nrdf(preset_source("example1"), d);
      FAIL("expected BadDistortion");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kBadDistortion);
    }
  }
}

TEST_CASE("zero-rate boundary recovers the stationary covariance") {
  const GaussMarkovSource ex1 = preset_source("example1");
  const Matrix sigma = *stationary_covariance(ex1);
  const NrdfSolution sol = nrdf(ex1, d_max(ex1));
  CHECK(sol.rate_bits <= 1e-6);
  CHECK((sol.pi - sigma).norm() <= 1e-6);
  // Just below the boundary the iterative path takes over and stays close.
  const NrdfSolution near = nrdf(ex1, d_max(ex1) * (1.0 - 1e-4));
  CHECK(near.rate_bits >= 0.0);
  CHECK(near.rate_bits <= 1e-3);
}

TEST_CASE("rates are nonincreasing and convex in D") {
  for (const char* name : {"example1", "example3", "example4"}) {
    const GaussMarkovSource src = preset_source(name);
    std::vector<double> grid;
    for (int i = 1; i <= 12; ++i) grid.push_back(0.25 * i);
    const RdCurve curve = rd_curve(src, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) REQUIRE_FALSE(curve.points[i].failed);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      CHECK(curve.points[i].rate_lower_bits <= curve.points[i - 1].rate_lower_bits + 1e-9);
    }
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double interp =
          0.5 * (curve.points[i - 1].rate_lower_bits + curve.points[i + 1].rate_lower_bits);
      CHECK(curve.points[i].rate_lower_bits <= interp + 1e-6);
    }
    for (const RdPoint& pt : curve.points) {
      CHECK(pt.rate_upper_scalar_bits >= pt.rate_lower_bits);
    }
  }
}

TEST_CASE("scalar curve hits zero at the stationary variance") {
  std::vector<double> grid;
  for (int i = 1; i <= 13; ++i) grid.push_back(0.1 * i);
  grid.push_back(4.0 / 3.0);
  grid.push_back(1.4);
  const RdCurve curve = rd_curve(scalar_source(0.5), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(curve.points[i].rate_lower_bits ==
          doctest::Approx(scalar_ar1_nrdf(0.5, 1.0, grid[i])).epsilon(1e-12));
  }
  CHECK(curve.points[13].rate_lower_bits == 0.0);
  CHECK(curve.points[14].rate_lower_bits == 0.0);
  CHECK(rd_curve(scalar_source(0.5), {0.7}).points.size() == 1);
}

TEST_CASE("unstable sources stay above the eigenvalue floor") {
  for (const char* name : {"example3", "example4"}) {
    const GaussMarkovSource src = preset_source(name);
    const double floor = stability_report(src).rate_floor_bits;
    for (int i = 1; i <= 20; ++i) {
      const double d = 3.0 * i / 20.0;
      CHECK(nrdf(src, d).rate_bits >= floor - 1e-6);
    }
  }
}

TEST_CASE("solution is a fixed point of the steady-state filter update") {
  std::mt19937_64 gen(3);
  std::vector<std::pair<GaussMarkovSource, double>> cases;
  cases.emplace_back(preset_source("example1"), 1.0);
  cases.emplace_back(preset_source("example3"), 1.5);
  cases.emplace_back(random_source(gen, 3, 0.9), 0.8);
  for (const auto& [src, d] : cases) {
    const NrdfSolution sol = nrdf(src, d);
    const Index p = src.state_dim();
    const Matrix h = Matrix::Identity(p, p) - sol.pi * sol.lambda.inverse();
    const Matrix sigma_v = sol.pi * h.transpose();
    const Matrix s = h * sol.lambda * h.transpose() + sigma_v;
    const Matrix updated = sol.lambda - sol.lambda * h.transpose() * s.inverse() * h * sol.lambda;
    CHECK((updated - sol.pi).norm() <= 1e-6);
  }
}

TEST_CASE("rd_curve validates its grid and flags failures") {
  const GaussMarkovSource src = preset_source("example1");
  auto code_of = [&](const std::vector<double>& grid) -> std::optional<ErrorCode> {
    try {
      rd_curve(src, grid);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  CHECK(code_of({}) == ErrorCode::kInvalidArgument);
  CHECK(code_of({1.0, 0.5}) == ErrorCode::kInvalidArgument);
  CHECK(code_of({-1.0, 0.5}) == ErrorCode::kBadDistortion);

  const GaussMarkovSource neither(Matrix::Zero(2, 2), (Matrix(2, 1) << 1.0, 0.0).finished());
  const RdCurve bad = rd_curve(neither, {0.5, 1.0});
  CHECK(bad.points[0].failed);
  CHECK_FALSE(bad.points[0].error.empty());
}
