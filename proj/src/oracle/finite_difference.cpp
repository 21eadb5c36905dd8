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

#include "admm_layer/oracle/oracle.hpp"

namespace admm_layer::oracle {

std::string_view to_string(ProblemField field) {
  switch (field) {
    case ProblemField::kQ: return "Q";
    case ProblemField::kP: return "p";
    case ProblemField::kA: return "A";
    case ProblemField::kB: return "b";
    case ProblemField::kL: return "l";
    case ProblemField::kU: return "u";
  }
  return "?";
}

namespace {

QPData perturbed(const QPProblem& problem, const FDSpec& spec, double h) {
  QPData data = problem.data();
  switch (spec.target) {
    case ProblemField::kQ:
      if (spec.row == spec.col) {
        data.Q(spec.row, spec.col) += h;
      } else {
        data.Q(spec.row, spec.col) += 0.5 * h;
        data.Q(spec.col, spec.row) += 0.5 * h;
      }
      break;
    case ProblemField::kP: data.p[spec.row] += h; break;
    case ProblemField::kA: data.A(spec.row, spec.col) += h; break;
    case ProblemField::kB: data.b[spec.row] += h; break;
    case ProblemField::kL: data.l[spec.row] += h; break;
    case ProblemField::kU: data.u[spec.row] += h; break;
  }
  return data;
}

void check_index(const QPProblem& problem, const FDSpec& spec) {
  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  bool ok = spec.row >= 0;
  switch (spec.target) {
    case ProblemField::kQ: ok = ok && spec.row < n && spec.col >= 0 && spec.col < n; break;
    case ProblemField::kA: ok = ok && spec.row < m && spec.col >= 0 && spec.col < n; break;
    case ProblemField::kB: ok = ok && spec.row < m; break;
    default: ok = ok && spec.row < n; break;
  }
  if (!ok) throw Error(ErrorCode::kDimensionMismatch, "FD index out of range");
  if (!(spec.step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "FD step must be positive");
}

}  // namespace

double fd_gradient(const QPProblem& problem, const LossFn& loss, const FDSpec& spec) {
  check_index(problem, spec);
  if (spec.target == ProblemField::kL && !std::isfinite(problem.l()[spec.row])) return 0.0;
  if (spec.target == ProblemField::kU && !std::isfinite(problem.u()[spec.row])) return 0.0;

  const QPProblem plus = validate_problem(perturbed(problem, spec, spec.step));
  const QPProblem minus = validate_problem(perturbed(problem, spec, -spec.step));
  const double f_plus = loss(reference_solve(plus).z_star);
  const double f_minus = loss(reference_solve(minus).z_star);
  return (f_plus - f_minus) / (2.0 * spec.step);
}

GradientBundle fd_bundle(const QPProblem& problem, const LossFn& loss, double step) {
  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  GradientBundle g = GradientBundle::zeros(n, m);
  FDSpec spec;
  spec.step = step;

  spec.target = ProblemField::kQ;
  for (Index j = 0; j < n; ++j) {
    for (Index k = j; k < n; ++k) {
      spec.row = j;
      spec.col = k;
      g.dQ(j, k) = g.dQ(k, j) = fd_gradient(problem, loss, spec);
    }
  }
  spec.col = 0;
  for (Index j = 0; j < n; ++j) {
    spec.row = j;
    spec.target = ProblemField::kP;
    g.dp[j] = fd_gradient(problem, loss, spec);
    spec.target = ProblemField::kL;
    g.dl[j] = fd_gradient(problem, loss, spec);
    spec.target = ProblemField::kU;
    g.du[j] = fd_gradient(problem, loss, spec);
  }
  for (Index i = 0; i < m; ++i) {
    spec.row = i;
    spec.target = ProblemField::kB;
    spec.col = 0;
    g.db[i] = fd_gradient(problem, loss, spec);
    spec.target = ProblemField::kA;
    for (Index j = 0; j < n; ++j) {
      spec.col = j;
      g.dA(i, j) = fd_gradient(problem, loss, spec);
    }
  }
  return g;
}

}  // namespace admm_layer::oracle
