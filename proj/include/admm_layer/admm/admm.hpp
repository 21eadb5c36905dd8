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

#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "admm_layer/admm/kkt_factorization.hpp"
#include "admm_layer/core/problem.hpp"

namespace admm_layer {

/// Euclidean projection onto [l, u]; infinite bounds never clip.
Vector project_box(const Vector& x, const Vector& l, const Vector& u);

/// One pass of the simplified iteration:
///
///   [x; eta]^{k+1} = -M^{-1} [p - rho (z^k - mu^k); -b]
///   z^{k+1}        = clamp(x^{k+1} + mu^k, l, u)
///   mu^{k+1}       = mu^k + x^{k+1} - z^{k+1}
///
/// The factorization must have been built from this problem's Q and A.
IterationState admm_step(const IterationState& state, const KKTFactorization& factorization,
                         const QPProblem& problem);

struct ResidualNorms {
  double primal = 0.0;  // ||x^k - z^k||_2
  double dual = 0.0;    // rho ||z^k - z^{k-1}||_2
};

ResidualNorms residual_norms(const Vector& z_prev, const IterationState& state, double rho);

/// Runs ADMM from `warm_start` (zeros when absent) until both residuals are
/// within tolerance or max_iter steps have been taken. Hitting max_iter is
/// not an error: the returned solution has converged == false.
///
/// The returned solution keeps the factorization so the backward pass can
/// reuse it, and the full iterate trace when config.record_trace is set
/// (memory O(iterations * d_z)).
QPSolution admm_solve(const QPProblem& problem, const SolverConfig& config,
                      const std::optional<IterationState>& warm_start = std::nullopt);

/// Same, with a factorization the caller has already built for this Q, A and
/// config.rho (e.g. shared across a mini-batch whose instances differ only in
/// p, b, l, u).
QPSolution admm_solve(const QPProblem& problem, const SolverConfig& config,
                      std::shared_ptr<const KKTFactorization> factorization,
                      const std::optional<IterationState>& warm_start = std::nullopt);

/// Box multipliers from the scaled dual: lambda_- = -min(rho mu, 0) and
/// lambda_+ = max(rho mu, 0).
DualPair recover_duals(const Vector& mu, double rho);

/// Final state of a solution, usable as a warm start.
IterationState warm_start_from(const QPSolution& solution);

}  // namespace admm_layer
