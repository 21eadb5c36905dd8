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

#include <algorithm>

namespace admm_layer {

namespace {

void check_factorization(const KKTFactorization& factorization, const QPProblem& problem) {
  if (factorization.num_vars() != problem.num_vars() || factorization.num_eq() != problem.num_eq()) {
    throw Error(ErrorCode::kDimensionMismatch, "factorization does not match problem dimensions");
  }
}

void check_state(const IterationState& state, const QPProblem& problem) {
  const Index n = problem.num_vars();
  if (state.z.size() != n || state.mu.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "warm start z and mu must have length d_z");
  }
}

// In-place step shared by admm_step and the solve loop. `rhs` is scratch.
void step_in_place(IterationState& s, const KKTFactorization& factorization,
                   const QPProblem& problem, Vector& rhs) {
  const double rho = factorization.rho();
  rhs = rho * (s.z - s.mu) - problem.p();
  factorization.solve(rhs, problem.b(), s.x, s.eta);
  s.z = s.x + s.mu;
  const Vector& l = problem.l();
  const Vector& u = problem.u();
  for (Index j = 0; j < s.z.size(); ++j) {
    const double v = s.z[j];
    const double z = std::min(std::max(v, l[j]), u[j]);
    s.mu[j] = v - z;
    s.z[j] = z;
  }
  ++s.k;
}

}  // namespace

Vector project_box(const Vector& x, const Vector& l, const Vector& u) {
  if (l.size() != x.size() || u.size() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "project_box: size mismatch");
  }
  return x.cwiseMax(l).cwiseMin(u);
}

IterationState admm_step(const IterationState& state, const KKTFactorization& factorization,
                         const QPProblem& problem) {
  check_factorization(factorization, problem);
  check_state(state, problem);
  IterationState next = state;
  Vector rhs;
  step_in_place(next, factorization, problem, rhs);
  return next;
}

ResidualNorms residual_norms(const Vector& z_prev, const IterationState& state, double rho) {
  return {(state.x - state.z).norm(), rho * (state.z - z_prev).norm()};
}

QPSolution admm_solve(const QPProblem& problem, const SolverConfig& config,
                      const std::optional<IterationState>& warm_start) {
  config.validate();
  auto factorization = std::make_shared<const KKTFactorization>(problem.Q(), problem.A(), config.rho);
  return admm_solve(problem, config, std::move(factorization), warm_start);
}

QPSolution admm_solve(const QPProblem& problem, const SolverConfig& config,
                      std::shared_ptr<const KKTFactorization> factorization,
                      const std::optional<IterationState>& warm_start) {
  config.validate();
  if (!factorization) throw Error(ErrorCode::kInvalidArgument, "null factorization");
  check_factorization(*factorization, problem);
  if (factorization->rho() != config.rho) {
    throw Error(ErrorCode::kInvalidArgument, "factorization was built with a different rho");
  }

  const Index n = problem.num_vars();
  const Index m = problem.num_eq();
  IterationState state = IterationState::zeros(n, m);
  if (warm_start) {
    check_state(*warm_start, problem);
    state.z = warm_start->z;
    state.mu = warm_start->mu;
    if (warm_start->x.size() == n) state.x = warm_start->x;
    if (warm_start->eta.size() == m) state.eta = warm_start->eta;
  }
  state.k = 0;

  std::shared_ptr<IterationTrace> trace;
  if (config.record_trace) {
    trace = std::make_shared<IterationTrace>();
    trace->initial = state;
  }

  QPSolution sol;
  sol.rho = config.rho;
  Vector rhs(n);
  Vector z_prev(n);
  Vector mu_prev(n);
  ResidualNorms res;
  while (state.k < config.max_iter) {
    z_prev = state.z;
    mu_prev = state.mu;
    step_in_place(state, *factorization, problem, rhs);
    if (trace) trace->steps.push_back(state);
    res = residual_norms(z_prev, state, config.rho);
    if (res.primal <= config.eps_primal && res.dual <= config.eps_dual) {
      sol.converged = true;
      break;
    }
  }

  sol.iterations = state.k;
  sol.primal_residual = res.primal;
  sol.dual_residual = res.dual;
  sol.v_star = state.x + mu_prev;
  sol.z_star = std::move(state.z);
  sol.x_star = std::move(state.x);
  sol.eta_star = std::move(state.eta);
  sol.mu_star = std::move(state.mu);
  sol.trace = std::move(trace);
  sol.factorization = std::move(factorization);
  return sol;
}

DualPair recover_duals(const Vector& mu, double rho) {
  DualPair duals;
  duals.lambda_minus = (-rho * mu).cwiseMax(0.0);
  duals.lambda_plus = (rho * mu).cwiseMax(0.0);
  return duals;
}

IterationState warm_start_from(const QPSolution& solution) {
  IterationState s;
  s.x = solution.x_star;
  s.z = solution.z_star;
  s.mu = solution.mu_star;
  s.eta = solution.eta_star;
  s.k = 0;
  return s;
}

}  // namespace admm_layer
