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

#include "admm_layer/core/problem.hpp"

#include <cmath>
#include <sstream>

namespace admm_layer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBoundsInverted: return "BoundsInverted";
    case ErrorCode::kAsymmetricQ: return "AsymmetricQ";
    case ErrorCode::kSingularKKT: return "SingularKKT";
    case ErrorCode::kSingularBackwardSystem: return "SingularBackwardSystem";
    case ErrorCode::kMissingTrace: return "MissingTrace";
    case ErrorCode::kCyclingDetected: return "CyclingDetected";
    case ErrorCode::kDegenerateRisk: return "DegenerateRisk";
    case ErrorCode::kInfeasibleRecast: return "InfeasibleRecast";
    case ErrorCode::kZeroSum: return "ZeroSum";
    case ErrorCode::kNonPositiveResidualVariance: return "NonPositiveResidualVariance";
    case ErrorCode::kRankDeficientFeatures: return "RankDeficientFeatures";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

void require_dims(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kDimensionMismatch, what);
}

}  // namespace

double QPProblem::objective(const Vector& z) const {
  return 0.5 * z.dot(data_.Q * z) + data_.p.dot(z);
}

QPProblem validate_problem(QPData data) {
  const Index n = data.p.size();
  if (n < 1) throw Error(ErrorCode::kDimensionMismatch, "problem needs at least one variable");
  require_dims(data.Q.rows() == n && data.Q.cols() == n, "Q must be d_z x d_z");
  require_dims(data.l.size() == n && data.u.size() == n, "l and u must have length d_z");
  const Index m = data.b.size();
  if (data.A.size() == 0 && m == 0) data.A.resize(0, n);
  require_dims(data.A.rows() == m && data.A.cols() == n, "A must be d_eq x d_z");

  if (!data.Q.allFinite() || !data.p.allFinite() || !data.A.allFinite() || !data.b.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "Q, p, A and b must be finite");
  }
  for (Index j = 0; j < n; ++j) {
    const double lo = data.l[j];
    const double hi = data.u[j];
    if (std::isnan(lo) || std::isnan(hi) || lo == kInf || hi == -kInf) {
      throw Error(ErrorCode::kInvalidArgument, "bounds must be numbers with l < +inf and u > -inf");
    }
    if (lo > hi) {
      std::ostringstream os;
      os << "l[" << j << "] = " << lo << " > u[" << j << "] = " << hi;
      throw Error(ErrorCode::kBoundsInverted, os.str());
    }
  }

  const double scale = data.Q.cwiseAbs().maxCoeff();
  const double asymmetry = (data.Q - data.Q.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > kSymmetryTolerance * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "max |Q - Q'| = " << asymmetry << " exceeds relative tolerance";
    throw Error(ErrorCode::kAsymmetricQ, os.str());
  }
  data.Q = (0.5 * (data.Q + data.Q.transpose())).eval();
  return QPProblem(std::move(data));
}

QPProblem validate_problem(Matrix Q, Vector p, Matrix A, Vector b, Vector l, Vector u) {
  return validate_problem(
      QPData{std::move(Q), std::move(p), std::move(A), std::move(b), std::move(l), std::move(u)});
}

SolverConfig SolverConfig::with_tolerance(double eps, double rho) {
  SolverConfig config;
  config.rho = rho;
  config.eps_primal = eps;
  config.eps_dual = eps;
  return config;
}

void SolverConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must be positive");
  }
  if (!(eps_primal > 0.0) || !(eps_dual > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "stopping tolerances must be positive");
  }
  if (max_iter < 1) throw Error(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
}

IterationState IterationState::zeros(Index num_vars, Index num_eq) {
  IterationState s;
  s.x = Vector::Zero(num_vars);
  s.z = Vector::Zero(num_vars);
  s.mu = Vector::Zero(num_vars);
  s.eta = Vector::Zero(num_eq);
  return s;
}

GradientBundle GradientBundle::zeros(Index num_vars, Index num_eq) {
  GradientBundle g;
  g.dQ = Matrix::Zero(num_vars, num_vars);
  g.dp = Vector::Zero(num_vars);
  g.dA = Matrix::Zero(num_eq, num_vars);
  g.db = Vector::Zero(num_eq);
  g.dl = Vector::Zero(num_vars);
  g.du = Vector::Zero(num_vars);
  return g;
}

GradientBundle& GradientBundle::operator+=(const GradientBundle& other) {
  dQ += other.dQ;
  dp += other.dp;
  dA += other.dA;
  db += other.db;
  dl += other.dl;
  du += other.du;
  return *this;
}

GradientBundle& GradientBundle::operator*=(double scale) {
  dQ *= scale;
  dp *= scale;
  dA *= scale;
  db *= scale;
  dl *= scale;
  du *= scale;
  return *this;
}

}  // namespace admm_layer
