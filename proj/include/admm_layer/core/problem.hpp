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

#include <Eigen/Dense>

#include <limits>
#include <memory>
#include <vector>

#include "admm_layer/core/error.hpp"

namespace admm_layer {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raw data of a parametric QP
///
///   minimize    0.5 z'Qz + p'z
///   subject to  Az = b,  l <= z <= u.
///
/// Bounds may be +/-infinity. A may have zero rows.
struct QPData {
  Matrix Q;
  Vector p;
  Matrix A;
  Vector b;
  Vector l;
  Vector u;
};

/// A validated, immutable QP instance. The only way to obtain one is through
/// validate_problem(), so holders can rely on consistent dimensions, l <= u
/// and an exactly symmetric Q.
class QPProblem {
 public:
  const QPData& data() const noexcept { return data_; }
  const Matrix& Q() const noexcept { return data_.Q; }
  const Vector& p() const noexcept { return data_.p; }
  const Matrix& A() const noexcept { return data_.A; }
  const Vector& b() const noexcept { return data_.b; }
  const Vector& l() const noexcept { return data_.l; }
  const Vector& u() const noexcept { return data_.u; }

  Index num_vars() const noexcept { return data_.p.size(); }
  Index num_eq() const noexcept { return data_.b.size(); }

  double objective(const Vector& z) const;

 private:
  friend QPProblem validate_problem(QPData data);
  explicit QPProblem(QPData data) : data_(std::move(data)) {}

  QPData data_;
};

/// Relative asymmetry below which Q is silently symmetrized.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Checks dimensions, bound ordering and symmetry of Q. Q is replaced by
/// (Q + Q')/2 when its relative asymmetry is within kSymmetryTolerance.
QPProblem validate_problem(QPData data);
QPProblem validate_problem(Matrix Q, Vector p, Matrix A, Vector b, Vector l, Vector u);

struct SolverConfig {
  double rho = 1.0;
  double eps_primal = 1e-6;
  double eps_dual = 1e-6;
  int max_iter = 10000;
  bool record_trace = false;

  /// Same tolerance for both residuals, the way the experiments quote it.
  static SolverConfig with_tolerance(double eps, double rho = 1.0);

  void validate() const;
};

/// Iterate (x^k, z^k, mu^k, eta^k) of the simplified ADMM recursion.
struct IterationState {
  Vector x;
  Vector z;
  Vector mu;
  Vector eta;
  int k = 0;

  static IterationState zeros(Index num_vars, Index num_eq);
};

/// Every iterate of a solve, in order. steps[k] holds the state after
/// iteration k + 1; `initial` is the starting state.
struct IterationTrace {
  IterationState initial;
  std::vector<IterationState> steps;
};

class KKTFactorization;

struct QPSolution {
  Vector z_star;
  Vector x_star;
  Vector eta_star;
  Vector mu_star;
  Vector v_star;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  double rho = 1.0;
  std::shared_ptr<const IterationTrace> trace;
  std::shared_ptr<const KKTFactorization> factorization;
};

/// Box multipliers split by sign. At most one side is nonzero per coordinate.
struct DualPair {
  Vector lambda_minus;
  Vector lambda_plus;
};

/// Gradient of a scalar loss with respect to every problem variable.
struct GradientBundle {
  Matrix dQ;
  Vector dp;
  Matrix dA;
  Vector db;
  Vector dl;
  Vector du;

  static GradientBundle zeros(Index num_vars, Index num_eq);

  GradientBundle& operator+=(const GradientBundle& other);
  GradientBundle& operator*=(double scale);
};

}  // namespace admm_layer
