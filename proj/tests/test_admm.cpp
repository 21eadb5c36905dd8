// Copyright 2026 The ADMM Layer Authors
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

#include <doctest.h>

#include "admm_layer/admm/admm.hpp"
#include "admm_layer/core/generate.hpp"
#include "admm_layer/oracle/oracle.hpp"

using namespace admm_layer;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

QPProblem symmetric_budget() {
  return validate_problem(Matrix::Identity(2, 2), vec({-1, -1}), Matrix::Ones(1, 2), vec({1}),
                          vec({0, 0}), vec({1, 1}));
}

}  // namespace

TEST_CASE("KKT factorization solves the small system") {
  Matrix A(1, 2);
  A << 1, 1;
  const KKTFactorization f(Matrix::Identity(2, 2), A, 1.0);
  Matrix expected(3, 3);
  expected << 2, 0, 1, 0, 2, 1, 1, 1, 0;
  CHECK(assemble_kkt_matrix(Matrix::Identity(2, 2), A, 1.0) == expected);
  const Vector s = f.solve(vec({0, 0, 1}));
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[1] == doctest::Approx(0.5));
  CHECK(s[2] == doctest::Approx(-1.0));
}

TEST_CASE("KKT factorization without equalities divides by Q + rho") {
  const KKTFactorization f(Matrix::Identity(3, 3), Matrix(0, 3), 1.0);
  const Vector s = f.solve(vec({2, -4, 1}));
  CHECK((s - vec({1, -2, 0.5})).norm() < 1e-15);
}

TEST_CASE("KKT factorization reproduces the right-hand side") {
  const QPProblem prob = generate_exp1_problem(15, 4);
  const KKTFactorization f = factorize_kkt(prob, 0.7);
  const Matrix M = assemble_kkt_matrix(prob.Q(), prob.A(), 0.7);
  const Vector rhs = Vector::LinSpaced(16, -1.0, 2.0);
  CHECK((M * f.solve(rhs) - rhs).norm() <= 1e-10 * rhs.norm());
}

TEST_CASE("rank-deficient A is rejected") {
  Matrix A(2, 2);
  A << 1, 1, 2, 2;
  CHECK_THROWS_AS(KKTFactorization(Matrix::Identity(2, 2), A, 1.0), Error);
  try {
    KKTFactorization(Matrix::Identity(2, 2), A, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularKKT);
  }
  Matrix Q(2, 2);
  Q << -3, 0, 0, 1;
  CHECK_THROWS_AS(KKTFactorization(Q, Matrix(0, 2), 1.0), Error);
}

TEST_CASE("project_box") {
  CHECK(project_box(vec({0.5}), vec({0}), vec({1})) == vec({0.5}));
  CHECK(project_box(vec({-3, 7}), vec({-1, -1}), vec({2, 2})) == vec({-1, 2}));
  CHECK(project_box(vec({0}), vec({0}), vec({1})) == vec({0}));
  CHECK(project_box(vec({5, -5}), vec({-kInf, -kInf}), vec({kInf, kInf})) == vec({5, -5}));
}

TEST_CASE("one ADMM step by hand") {
  const QPProblem prob =
      validate_problem(Matrix::Identity(1, 1), vec({-1}), Matrix(0, 1), Vector(0), vec({0}), vec({1}));
  const KKTFactorization f = factorize_kkt(prob, 1.0);
  const IterationState next = admm_step(IterationState::zeros(1, 0), f, prob);
  CHECK(next.x[0] == doctest::Approx(0.5));
  CHECK(next.z[0] == doctest::Approx(0.5));
  CHECK(next.mu[0] == doctest::Approx(0.0));
  CHECK(next.k == 1);
}

TEST_CASE("steps stay in the box and the optimum is a fixed point") {
  const QPProblem prob = generate_exp1_problem(8, 11);
  const KKTFactorization f = factorize_kkt(prob, 1.0);
  IterationState s = IterationState::zeros(8, 1);
  for (int k = 0; k < 20; ++k) {
    s = admm_step(s, f, prob);
    CHECK((s.z.array() >= prob.l().array()).all());
    CHECK((s.z.array() <= prob.u().array()).all());
  }
  const QPSolution sol = admm_solve(prob, SolverConfig::with_tolerance(1e-13));
  REQUIRE(sol.converged);
  const IterationState again = admm_step(warm_start_from(sol), f, prob);
  CHECK((again.z - sol.z_star).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((again.mu - sol.mu_star).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((again.x - sol.x_star).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("residual norms") {
  IterationState s = IterationState::zeros(2, 0);
  ResidualNorms r = residual_norms(s.z, s, 1.0);
  CHECK(r.primal == 0.0);
  CHECK(r.dual == 0.0);
  s.x = vec({1, 0});
  r = residual_norms(vec({0, 0}), s, 2.0);
  CHECK(r.primal == 1.0);
  CHECK(r.dual == 0.0);
  s.z = vec({0.3, -0.4});
  r = residual_norms(vec({0, 0}), s, 2.0);
  CHECK(r.dual == doctest::Approx(1.0));
}

TEST_CASE("admm_solve on closed-form instances") {
  const QPSolution a = admm_solve(symmetric_budget(), SolverConfig::with_tolerance(1e-9));
  CHECK(a.converged);
  CHECK((a.z_star - vec({0.5, 0.5})).norm() < 1e-8);

  const QPProblem sep = validate_problem(Matrix::Identity(2, 2), vec({0.3, -0.7}), Matrix(0, 2),
                                         Vector(0), vec({0, 0}), vec({1, 1}));
  const QPSolution b = admm_solve(sep, SolverConfig::with_tolerance(1e-9));
  CHECK(b.converged);
  CHECK((b.z_star - vec({0, 0.7})).norm() < 1e-8);
  CHECK(b.mu_star[0] < 0.0);  // lower bound active
  CHECK(b.v_star[0] < 0.0);
}

TEST_CASE("admm_solve reports non-convergence without throwing") {
  SolverConfig c = SolverConfig::with_tolerance(1e-14);
  c.max_iter = 3;
  const QPSolution s = admm_solve(generate_exp1_problem(10, 2), c);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 3);
}

TEST_CASE("trace recording") {
  SolverConfig c = SolverConfig::with_tolerance(1e-6);
  c.record_trace = true;
  const QPSolution s = admm_solve(generate_exp1_problem(6, 3), c);
  REQUIRE(s.trace);
  CHECK(static_cast<int>(s.trace->steps.size()) == s.iterations);
  CHECK(s.trace->steps.back().z == s.z_star);
  CHECK(s.trace->initial.z.isZero());
  const QPSolution plain = admm_solve(generate_exp1_problem(6, 3), SolverConfig::with_tolerance(1e-6));
  CHECK_FALSE(plain.trace);
  CHECK(plain.z_star == s.z_star);
}

TEST_CASE("v* pairs the last x with the preceding mu") {
  SolverConfig c = SolverConfig::with_tolerance(1e-6);
  c.record_trace = true;
  const QPSolution s = admm_solve(generate_exp1_problem(6, 8), c);
  const auto& steps = s.trace->steps;
  REQUIRE(steps.size() >= 2);
  const Vector expected = steps.back().x + steps[steps.size() - 2].mu;
  CHECK((s.v_star - expected).norm() == 0.0);
  CHECK((s.v_star - (s.z_star + s.mu_star)).norm() < 1e-12);
}

TEST_CASE("warm start from the solution converges in at most two iterations") {
  const QPProblem prob = generate_exp1_problem(20, 21);
  const SolverConfig c = SolverConfig::with_tolerance(1e-6);
  const QPSolution cold = admm_solve(prob, c);
  REQUIRE(cold.converged);
  const QPSolution warm = admm_solve(prob, c, warm_start_from(cold));
  CHECK(warm.converged);
  CHECK(warm.iterations <= 2);
}

TEST_CASE("shared factorization gives identical iterates") {
  const QPProblem prob = generate_exp1_problem(12, 5);
  const SolverConfig c = SolverConfig::with_tolerance(1e-6);
  auto f = std::make_shared<const KKTFactorization>(prob.Q(), prob.A(), 1.0);
  const QPSolution a = admm_solve(prob, c, f);
  const QPSolution b = admm_solve(prob, c);
  CHECK(a.z_star == b.z_star);
  CHECK(a.iterations == b.iterations);
  SolverConfig other = c;
  other.rho = 0.5;
  CHECK_THROWS_AS(admm_solve(prob, other, f), Error);
}

TEST_CASE("recover_duals") {
  const DualPair d = recover_duals(vec({0.2, -0.1, 0}), 1.0);
  CHECK(d.lambda_plus == vec({0.2, 0, 0}));
  CHECK(d.lambda_minus == vec({0, 0.1, 0}));
  const DualPair z = recover_duals(Vector::Zero(3), 2.0);
  CHECK(z.lambda_plus.isZero());
  CHECK(z.lambda_minus.isZero());
  const DualPair r = recover_duals(Vector::LinSpaced(9, -2, 2), 0.3);
  CHECK((r.lambda_plus.array() * r.lambda_minus.array()).isZero(0.0));
  CHECK((r.lambda_plus.array() >= 0).all());
  CHECK((r.lambda_minus.array() >= 0).all());
}

TEST_CASE("agreement with the reference solver and KKT conditions") {
  const SolverConfig c = SolverConfig::with_tolerance(1e-6);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    const QPProblem prob = generate_exp1_problem(20, seed);
    const QPSolution sol = admm_solve(prob, c);
    REQUIRE(sol.converged);
    const QPSolution ref = oracle::reference_solve(prob);
    CHECK((sol.z_star - ref.z_star).lpNorm<Eigen::Infinity>() <= 1e-5);
    const double gap = prob.objective(sol.z_star) - prob.objective(ref.z_star);
    CHECK(gap <= 1e-6 * (1.0 + std::abs(prob.objective(ref.z_star))));

    const oracle::KKTResiduals r = oracle::kkt_residuals(prob, sol);
    CHECK(r.stationarity <= 1e-5);
    CHECK(r.equality <= 1e-5);
    CHECK(r.complementarity <= 1e-5);
    CHECK(r.bounds == 0.0);

    // One more step moves the iterate by no more than a few tolerances.
    const KKTFactorization& f = *sol.factorization;
    const IterationState next = admm_step(warm_start_from(sol), f, prob);
    CHECK((next.z - sol.z_star).norm() <= 10 * c.eps_dual);
  }
}
