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

#include <Eigen/Cholesky>

#include "admm_layer/core/problem.hpp"

namespace admm_layer {

/// Factorization of the ADMM linear system
///
///   M = [ Q + rho I   A' ]
///       [ A           0  ]
///
/// M is symmetric indefinite. It is factored by block elimination: a Cholesky
/// factor of H = Q + rho I and a Cholesky factor of the Schur complement
/// S = A H^{-1} A'. Both must be numerically positive definite; otherwise the
/// problem is rejected with SingularKKT (Q + rho I not positive definite, or A
/// rank deficient).
///
/// Immutable once built; safe to share between concurrent solves that use the
/// same (Q, A, rho).
class KKTFactorization {
 public:
  KKTFactorization(const Matrix& Q, const Matrix& A, double rho);

  /// Solves M [x; eta] = [top; bottom].
  void solve(const Vector& top, const Vector& bottom, Vector& x, Vector& eta) const;

  /// Solves M s = rhs for a stacked right-hand side of length d_z + d_eq.
  Vector solve(const Vector& rhs) const;

  double rho() const noexcept { return rho_; }
  Index num_vars() const noexcept { return num_vars_; }
  Index num_eq() const noexcept { return num_eq_; }

 private:
  double rho_;
  Index num_vars_;
  Index num_eq_;
  Matrix A_;
  Eigen::LLT<Matrix> h_llt_;
  Matrix h_inv_at_;  // H^{-1} A'
  Eigen::LLT<Matrix> schur_llt_;
};

KKTFactorization factorize_kkt(const QPProblem& problem, double rho);

/// Dense M, for tests and for the backward engines that need M itself.
Matrix assemble_kkt_matrix(const Matrix& Q, const Matrix& A, double rho);

}  // namespace admm_layer
