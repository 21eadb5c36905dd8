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

#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "admm_layer/admm/admm.hpp"
#include "admm_layer/diff/diff.hpp"
#include "lu_check.hpp"

namespace admm_layer {

namespace {

// One row of G z <= h: sign * z_j <= h with sign -1 for a lower bound.
struct BoxRow {
  Index var;
  double sign;
  double h;
  double lambda;
};

// Lower-bound rows first, then upper-bound rows, matching G = [-I; I].
std::vector<BoxRow> finite_box_rows(const QPProblem& problem, const QPSolution& solution) {
  const DualPair duals = recover_duals(solution.mu_star, solution.rho);
  const Index n = problem.num_vars();
  std::vector<BoxRow> rows;
  rows.reserve(static_cast<std::size_t>(2 * n));
  for (Index j = 0; j < n; ++j) {
    if (std::isfinite(problem.l()[j])) rows.push_back({j, -1.0, -problem.l()[j], duals.lambda_minus[j]});
  }
  for (Index j = 0; j < n; ++j) {
    if (std::isfinite(problem.u()[j])) rows.push_back({j, 1.0, problem.u()[j], duals.lambda_plus[j]});
  }
  return rows;
}

Matrix assemble(const QPProblem& problem, const QPSolution& solution,
                const std::vector<BoxRow>& rows) {
  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  const Index c = static_cast<Index>(rows.size());
  const Vector& z = solution.z_star;

  // [ Q   G' diag(lambda)   A' ]
  // [ G   diag(G z - h)     0  ]
  // [ A   0                 0  ]
  Matrix K = Matrix::Zero(n + c + m, n + c + m);
  K.topLeftCorner(n, n) = problem.Q();
  K.block(0, n + c, n, m) = problem.A().transpose();
  K.block(n + c, 0, m, n) = problem.A();
  for (Index i = 0; i < c; ++i) {
    const BoxRow& r = rows[static_cast<std::size_t>(i)];
    K(r.var, n + i) = r.sign * r.lambda;
    K(n + i, r.var) = r.sign;
    K(n + i, n + i) = r.sign * z[r.var] - r.h;
  }
  return K;
}

}  // namespace

Matrix kkt_backward_matrix(const QPProblem& problem, const QPSolution& solution) {
  return assemble(problem, solution, finite_box_rows(problem, solution));
}

GradientBundle backward_kkt(const QPProblem& problem, const QPSolution& solution,
                            const Vector& grad_z) {
  if (grad_z.size() != problem.num_vars()) {
    throw Error(ErrorCode::kDimensionMismatch, "grad_z must have length d_z");
  }
  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  const std::vector<BoxRow> rows = finite_box_rows(problem, solution);
  const Index c = static_cast<Index>(rows.size());

  const Matrix K = assemble(problem, solution, rows);
  Vector rhs = Vector::Zero(n + c + m);
  rhs.head(n) = -grad_z;

  const Eigen::PartialPivLU<Matrix> lu(K);
  if (detail::lu_is_singular(lu)) {
    throw Error(ErrorCode::kSingularBackwardSystem,
                "KKT backward system is singular (weak complementarity)");
  }
  const Vector d = lu.solve(rhs);
  const auto d_z = d.head(n);
  const auto d_lambda = d.segment(n, c);
  const auto d_eta = d.tail(m);
  const Vector& z = solution.z_star;
  const Vector& eta = solution.eta_star;

  GradientBundle g = GradientBundle::zeros(n, m);
  g.dQ = 0.5 * (d_z * z.transpose() + z * d_z.transpose());
  g.dp = d_z;
  g.dA = d_eta * z.transpose() + eta * d_z.transpose();
  g.db = -d_eta;
  // dh = -diag(lambda) d_lambda, and h = [-l; u].
  for (Index i = 0; i < c; ++i) {
    const BoxRow& r = rows[static_cast<std::size_t>(i)];
    const double dh = -r.lambda * d_lambda[i];
    if (r.sign < 0.0) {
      g.dl[r.var] = -dh;
    } else {
      g.du[r.var] = dh;
    }
  }
  return g;
}

}  // namespace admm_layer
