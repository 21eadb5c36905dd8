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
#include <string>

#include "admm_layer/ipo/ipo.hpp"

namespace admm_layer::ipo {

namespace {

constexpr double kMinRisk = 1e-14;

void check_shapes(const Vector& z, const Vector& v, const Matrix& Q) {
  if (v.size() != z.size() || Q.rows() != z.size() || Q.cols() != z.size())
    throw Error(ErrorCode::kDimensionMismatch, "loss operands have inconsistent sizes");
}

double checked_risk(const Vector& z, const Matrix& Q) {
  const double risk = z.dot(Q * z);
  if (!(risk > kMinRisk))
    throw Error(ErrorCode::kDegenerateRisk, "portfolio variance " + std::to_string(risk) + " is degenerate");
  return risk;
}

}  // namespace

double qp_decision_loss(const Vector& z, const Vector& p_true, const Matrix& Q_true) {
  check_shapes(z, p_true, Q_true);
  return z.dot(p_true) + 0.5 * z.dot(Q_true * z);
}

Vector qp_decision_loss_seed(const Vector& z, const Vector& p_true, const Matrix& Q_true) {
  check_shapes(z, p_true, Q_true);
  return p_true + Q_true * z;
}

double sharpe_loss(const Vector& z, const Vector& a_true, const Matrix& Q_true) {
  check_shapes(z, a_true, Q_true);
  return -a_true.dot(z) / std::sqrt(checked_risk(z, Q_true));
}

Vector sharpe_loss_seed(const Vector& z, const Vector& a_true, const Matrix& Q_true) {
  check_shapes(z, a_true, Q_true);
  const double risk = checked_risk(z, Q_true);
  const double sigma = std::sqrt(risk);
  return -(a_true / sigma - (a_true.dot(z) / (risk * sigma)) * (Q_true * z));
}

double min_var_loss(const Vector& z, const Matrix& Q_true) {
  check_shapes(z, z, Q_true);
  return z.dot(Q_true * z);
}

Vector min_var_loss_seed(const Vector& z, const Matrix& Q_true) {
  check_shapes(z, z, Q_true);
  return 2.0 * (Q_true * z);
}

}  // namespace admm_layer::ipo
