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

#include "admm_layer/ipo/ipo.hpp"

namespace admm_layer::ipo {

QPProblem max_sharpe_problem(const Vector& a_hat, const Matrix& Q) {
  const Index n = a_hat.size();
  if (Q.rows() != n || Q.cols() != n)
    throw Error(ErrorCode::kDimensionMismatch, "Q does not match a_hat");
  if (!(a_hat.array() > 0.0).any())
    throw Error(ErrorCode::kInfeasibleRecast, "no asset has a positive predicted return");
  return validate_problem(Q, Vector::Zero(n), a_hat.transpose(), Vector::Ones(1), Vector::Zero(n),
                          Vector::Constant(n, kInf));
}

Vector normalize_weights(const Vector& z) {
  const double total = z.sum();
  if (!(std::abs(total) > 1e-12)) throw Error(ErrorCode::kZeroSum, "weights sum to zero");
  return z / total;
}

Matrix build_covariance(const Matrix& theta, const Matrix& W_cov, const Vector& F_diag) {
  if (W_cov.rows() != theta.rows() || W_cov.cols() != theta.rows() || F_diag.size() != theta.cols())
    throw Error(ErrorCode::kDimensionMismatch, "covariance factors have inconsistent sizes");
  if (!(F_diag.array() > 0.0).all())
    throw Error(ErrorCode::kNonPositiveResidualVariance, "residual variances must be positive");
  Matrix q = theta.transpose() * W_cov * theta;
  q = 0.5 * (q + q.transpose()).eval();
  q.diagonal() += F_diag;
  return q;
}

}  // namespace admm_layer::ipo
