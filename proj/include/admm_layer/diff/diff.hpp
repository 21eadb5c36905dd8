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

#include <string_view>

#include "admm_layer/admm/kkt_factorization.hpp"
#include "admm_layer/core/problem.hpp"

namespace admm_layer {

enum class BackwardMethod { kFixedPoint, kKKTImplicit, kUnrolled };

/// "fp", "kkt", "unroll".
std::string_view to_string(BackwardMethod method);
BackwardMethod parse_backward_method(std::string_view name);

/// |mu_j| below this counts as zero when forming mu-tilde.
inline constexpr double kMuZeroThreshold = 1e-12;

/// Backward systems whose reciprocal condition estimate falls below this are
/// reported as SingularBackwardSystem.
inline constexpr double kSingularRcond = 1e-14;

struct BackwardOptions {
  /// Shrinks the interval used for the projection derivative to
  /// [l + eps, u - eps]. Zero reproduces the closed-interval derivative.
  double boundary_perturbation = 0.0;
};

/// Diagonal of the projection derivative: 1 where l_j <= v_j <= u_j (closed
/// interval), 0 where v is clipped.
Vector projection_mask(const Vector& v, const Vector& l, const Vector& u,
                       double boundary_perturbation = 0.0);

// ---------------------------------------------------------------------------
// Fixed-point view of the iteration, on the stacked variable (v, eta) with
// v = x + mu:
//
//   F(v, eta) = -M^{-1} [p - rho (2 Pi(v) - v); -b] + [v - Pi(v); 0]

Vector fixed_point_map(const QPProblem& problem, const KKTFactorization& factorization,
                       const Vector& v, const Vector& eta);

/// F(v, eta) - (v, eta).
Vector fixed_point_residual(const QPProblem& problem, double rho, const Vector& v,
                            const Vector& eta);
Vector fixed_point_residual(const QPProblem& problem, const KKTFactorization& factorization,
                            const Vector& v, const Vector& eta);

/// Dense Jacobian of F with respect to (v, eta).
Matrix fixed_point_jacobian(const QPProblem& problem, const KKTFactorization& factorization,
                            const Vector& v, double boundary_perturbation = 0.0);

/// diag(D, I) M + diag(-rho (2D - I), 0), size (d_z + d_eq).
Matrix fixed_point_backward_matrix(const QPProblem& problem, const QPSolution& solution,
                                   const BackwardOptions& options = {});

/// Transposed KKT differential of the QP with box rows G = [-I; I] and
/// h = [-l; u] (finite bounds only), size (d_z + #finite bounds + d_eq).
Matrix kkt_backward_matrix(const QPProblem& problem, const QPSolution& solution);

// ---------------------------------------------------------------------------
// Backward engines. Each maps dl/dz* to the gradient with respect to
// (Q, p, A, b, l, u) and is linear in grad_z.

GradientBundle backward_fixed_point(const QPProblem& problem, const QPSolution& solution,
                                    const Vector& grad_z, const BackwardOptions& options = {});

GradientBundle backward_kkt(const QPProblem& problem, const QPSolution& solution,
                            const Vector& grad_z);

/// Reverse sweep over the recorded iterates. Requires a solution produced with
/// record_trace; throws MissingTrace otherwise.
GradientBundle backward_unrolled(const QPProblem& problem, const QPSolution& solution,
                                 const Vector& grad_z);

struct TimedGradient {
  GradientBundle gradient;
  double seconds = 0.0;
};

TimedGradient backward(const QPProblem& problem, const QPSolution& solution, const Vector& grad_z,
                       BackwardMethod method, const BackwardOptions& options = {});

}  // namespace admm_layer
