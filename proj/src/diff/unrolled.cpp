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

#include "admm_layer/admm/admm.hpp"
#include "admm_layer/diff/diff.hpp"

namespace admm_layer {

GradientBundle backward_unrolled(const QPProblem& problem, const QPSolution& solution,
                                 const Vector& grad_z) {
  if (!solution.trace) {
    throw Error(ErrorCode::kMissingTrace, "unrolled backward needs a solve with record_trace");
  }
  if (grad_z.size() != problem.num_vars()) {
    throw Error(ErrorCode::kDimensionMismatch, "grad_z must have length d_z");
  }
  const IterationTrace& trace = *solution.trace;
  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  const double rho = solution.rho;

  std::shared_ptr<const KKTFactorization> factorization = solution.factorization;
  if (!factorization) {
    factorization = std::make_shared<const KKTFactorization>(problem.Q(), problem.A(), rho);
  }

  GradientBundle g = GradientBundle::zeros(n, m);
  const Vector& l = problem.l();
  const Vector& u = problem.u();

  // Adjoints of z^{k+1} and mu^{k+1} entering the reverse step of iteration k.
  Vector z_bar = grad_z;
  Vector mu_bar = Vector::Zero(n);
  Vector v_bar(n);
  Vector r_x, r_eta;
  const Vector zero_eq = Vector::Zero(m);

  for (std::size_t k = trace.steps.size(); k-- > 0;) {
    const IterationState& step = trace.steps[k];
    const Vector& mu_prev = k == 0 ? trace.initial.mu : trace.steps[k - 1].mu;

    // mu^{k+1} = v - z^{k+1}, z^{k+1} = clamp(v, l, u), v = x^{k+1} + mu^k.
    for (Index j = 0; j < n; ++j) {
      const double v = step.x[j] + mu_prev[j];
      const double z_total = z_bar[j] - mu_bar[j];
      if (v < l[j]) {
        g.dl[j] += z_total;
        v_bar[j] = mu_bar[j];
      } else if (v > u[j]) {
        g.du[j] += z_total;
        v_bar[j] = mu_bar[j];
      } else {
        v_bar[j] = mu_bar[j] + z_total;
      }
    }

    // [x; eta] = M^{-1} r with r = [rho (z^k - mu^k) - p; b]; M is symmetric.
    factorization->solve(v_bar, zero_eq, r_x, r_eta);
    g.dp -= r_x;
    g.db += r_eta;
    g.dQ.noalias() -= r_x * step.x.transpose();
    g.dA.noalias() -= step.eta * r_x.transpose();
    g.dA.noalias() -= r_eta * step.x.transpose();

    z_bar = rho * r_x;
    mu_bar = v_bar - rho * r_x;
  }

  g.dQ = (0.5 * (g.dQ + g.dQ.transpose())).eval();
  return g;
}

}  // namespace admm_layer
