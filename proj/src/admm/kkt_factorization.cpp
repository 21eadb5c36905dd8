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

#include "admm_layer/admm/kkt_factorization.hpp"

namespace admm_layer {

namespace {

// Pivots of a Cholesky factor below this fraction of the largest diagonal
// entry of the factored matrix are treated as zero.
constexpr double kPivotTolerance = 1e-12;

bool factor_is_regular(const Eigen::LLT<Matrix>& llt, const Matrix& m) {
  if (llt.info() != Eigen::Success) return false;
  if (m.rows() == 0) return true;
  const double scale = m.diagonal().cwiseAbs().maxCoeff();
  const Vector pivots = llt.matrixLLT().diagonal().cwiseAbs2();
  return pivots.minCoeff() > kPivotTolerance * scale;
}

}  // namespace

KKTFactorization::KKTFactorization(const Matrix& Q, const Matrix& A, double rho)
    : rho_(rho), num_vars_(Q.rows()), num_eq_(A.rows()), A_(A) {
  if (!(rho > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rho must be positive");
  if (A.cols() != num_vars_) throw Error(ErrorCode::kDimensionMismatch, "A must have d_z columns");

  Matrix H = Q;
  H.diagonal().array() += rho;
  h_llt_.compute(H);
  if (!factor_is_regular(h_llt_, H)) {
    throw Error(ErrorCode::kSingularKKT, "Q + rho I is not positive definite");
  }
  if (num_eq_ > 0) {
    h_inv_at_ = h_llt_.solve(A.transpose());
    const Matrix S = A * h_inv_at_;
    schur_llt_.compute(S);
    if (!factor_is_regular(schur_llt_, S)) {
      throw Error(ErrorCode::kSingularKKT, "equality matrix A is rank deficient");
    }
  }
}

void KKTFactorization::solve(const Vector& top, const Vector& bottom, Vector& x, Vector& eta) const {
  // H x + A' eta = top, A x = bottom
  //   => S eta = A H^{-1} top - bottom,  x = H^{-1} top - H^{-1} A' eta
  x = h_llt_.solve(top);
  if (num_eq_ == 0) {
    eta.resize(0);
    return;
  }
  eta = schur_llt_.solve(A_ * x - bottom);
  x.noalias() -= h_inv_at_ * eta;
}

Vector KKTFactorization::solve(const Vector& rhs) const {
  if (rhs.size() != num_vars_ + num_eq_) {
    throw Error(ErrorCode::kDimensionMismatch, "rhs must have length d_z + d_eq");
  }
  Vector x, eta;
  solve(rhs.head(num_vars_), rhs.tail(num_eq_), x, eta);
  Vector out(num_vars_ + num_eq_);
  out << x, eta;
  return out;
}

KKTFactorization factorize_kkt(const QPProblem& problem, double rho) {
  return KKTFactorization(problem.Q(), problem.A(), rho);
}

Matrix assemble_kkt_matrix(const Matrix& Q, const Matrix& A, double rho) {
  const Index n = Q.rows();
  const Index m = A.rows();
  Matrix M = Matrix::Zero(n + m, n + m);
  M.topLeftCorner(n, n) = Q;
  M.topLeftCorner(n, n).diagonal().array() += rho;
  M.topRightCorner(n, m) = A.transpose();
  M.bottomLeftCorner(m, n) = A;
  return M;
}

}  // namespace admm_layer
