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

#include <Eigen/LU>

#include "admm_layer/admm/admm.hpp"
#include "admm_layer/diff/diff.hpp"
#include "lu_check.hpp"

namespace admm_layer {

namespace {

void check_grad(const QPProblem& problem, const Vector& grad_z) {
  if (grad_z.size() != problem.num_vars()) {
    throw Error(ErrorCode::kDimensionMismatch, "grad_z must have length d_z");
  }
}

}  // namespace

Vector fixed_point_map(const QPProblem& problem, const KKTFactorization& factorization,
                       const Vector& v, const Vector& eta) {
  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  if (v.size() != n || eta.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "v must have length d_z and eta length d_eq");
  }
  const double rho = factorization.rho();
  const Vector z = project_box(v, problem.l(), problem.u());
  const Vector top = rho * (2.0 * z - v) - problem.p();
  Vector x, eta_next;
  factorization.solve(top, problem.b(), x, eta_next);
  Vector out(n + m);
  out << x + v - z, eta_next;
  return out;
}

Vector fixed_point_residual(const QPProblem& problem, const KKTFactorization& factorization,
                            const Vector& v, const Vector& eta) {
  Vector current(v.size() + eta.size());
  current << v, eta;
  return fixed_point_map(problem, factorization, v, eta) - current;
}

Vector fixed_point_residual(const QPProblem& problem, double rho, const Vector& v,
                            const Vector& eta) {
  return fixed_point_residual(problem, factorize_kkt(problem, rho), v, eta);
}

Matrix fixed_point_jacobian(const QPProblem& problem, const KKTFactorization& factorization,
                            const Vector& v, double boundary_perturbation) {
  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  const double rho = factorization.rho();
  const Vector mask = projection_mask(v, problem.l(), problem.u(), boundary_perturbation);

  // -M^{-1} diag(-rho (2D - I), 0) has nonzero columns only in the v block.
  Matrix jac = Matrix::Zero(n + m, n + m);
  Vector e = Vector::Zero(n + m);
  for (Index j = 0; j < n; ++j) {
    e.setZero();
    e[j] = rho * (2.0 * mask[j] - 1.0);
    jac.col(j) = factorization.solve(e);
    jac(j, j) += 1.0 - mask[j];
  }
  return jac;
}

Matrix fixed_point_backward_matrix(const QPProblem& problem, const QPSolution& solution,
                                   const BackwardOptions& options) {
  const Index n = problem.num_vars();
  const double rho = solution.rho;
  const Vector mask =
      projection_mask(solution.v_star, problem.l(), problem.u(), options.boundary_perturbation);
  Matrix K = assemble_kkt_matrix(problem.Q(), problem.A(), rho);
  for (Index i = 0; i < n; ++i) {
    if (mask[i] == 0.0) K.row(i).setZero();
    K(i, i) -= rho * (2.0 * mask[i] - 1.0);
  }
  return K;
}

GradientBundle backward_fixed_point(const QPProblem& problem, const QPSolution& solution,
                                    const Vector& grad_z, const BackwardOptions& options) {
  check_grad(problem, grad_z);
  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  const double rho = solution.rho;
  const Vector mask =
      projection_mask(solution.v_star, problem.l(), problem.u(), options.boundary_perturbation);

  const Matrix K = fixed_point_backward_matrix(problem, solution, options);
  Vector rhs = Vector::Zero(n + m);
  rhs.head(n) = -mask.cwiseProduct(grad_z);

  const Eigen::PartialPivLU<Matrix> lu(K);
  if (detail::lu_is_singular(lu)) {
    throw Error(ErrorCode::kSingularBackwardSystem,
                "fixed-point backward system is singular (degenerate active set)");
  }
  const Vector d = lu.solve(rhs);
  const auto d_x = d.head(n);
  const auto d_eta = d.tail(m);
  const Vector& x = solution.x_star;
  const Vector& eta = solution.eta_star;

  GradientBundle g;
  g.dQ = 0.5 * (d_x * x.transpose() + x * d_x.transpose());
  g.dp = d_x;
  g.dA = d_eta * x.transpose() + eta * d_x.transpose();
  g.db = -d_eta;

  // Box bounds: recover d_lambda from the stationarity row, using mu-tilde
  // (mu with zeros replaced by one) to keep the division defined.
  const Vector& mu = solution.mu_star;
  Vector d_lambda = -grad_z - problem.Q() * d_x - problem.A().transpose() * d_eta;
  for (Index j = 0; j < n; ++j) {
    const double mu_tilde = std::abs(mu[j]) < kMuZeroThreshold ? 1.0 : mu[j];
    d_lambda[j] /= rho * mu_tilde;
  }
  const DualPair duals = recover_duals(mu, rho);
  g.dl = duals.lambda_minus.cwiseProduct(d_lambda);
  g.du = -duals.lambda_plus.cwiseProduct(d_lambda);
  return g;
}

}  // namespace admm_layer
