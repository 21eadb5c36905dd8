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

#include <algorithm>
#include <cmath>
#include <limits>

#include "admm_layer/oracle/oracle.hpp"

namespace admm_layer::oracle {

double KKTResiduals::max() const {
  return std::max({stationarity, equality, bounds, complementarity});
}

KKTResiduals kkt_residuals(const QPProblem& problem, const Vector& z, const Vector& eta,
                           const Vector& mu, double rho) {
  const Index n = problem.num_vars();
  KKTResiduals r;
  const Vector stationarity =
      problem.p() + problem.Q() * z + problem.A().transpose() * eta + rho * mu;
  r.stationarity = stationarity.cwiseAbs().maxCoeff();
  r.equality = problem.num_eq() > 0 ? (problem.A() * z - problem.b()).cwiseAbs().maxCoeff() : 0.0;
  for (Index j = 0; j < n; ++j) {
    const double lo = problem.l()[j];
    const double hi = problem.u()[j];
    r.bounds = std::max({r.bounds, lo - z[j], z[j] - hi});
    const double lambda_minus = std::max(-rho * mu[j], 0.0);
    const double lambda_plus = std::max(rho * mu[j], 0.0);
    // A multiplier on an infinite bound can never be complementary.
    const double gap_lo = std::isfinite(lo) ? std::abs(z[j] - lo) : kInf;
    const double gap_hi = std::isfinite(hi) ? std::abs(hi - z[j]) : kInf;
    if (lambda_minus > 0.0) r.complementarity = std::max(r.complementarity, lambda_minus * gap_lo);
    if (lambda_plus > 0.0) r.complementarity = std::max(r.complementarity, lambda_plus * gap_hi);
  }
  return r;
}

KKTResiduals kkt_residuals(const QPProblem& problem, const QPSolution& solution) {
  return kkt_residuals(problem, solution.z_star, solution.eta_star, solution.mu_star, solution.rho);
}

bool strictly_complementary(const QPProblem& problem, const QPSolution& solution, double margin) {
  const Vector signed_multiplier = solution.rho * solution.mu_star;
  for (Index j = 0; j < problem.num_vars(); ++j) {
    const double v = solution.z_star[j] + signed_multiplier[j];
    if (std::isfinite(problem.l()[j]) && std::abs(v - problem.l()[j]) < margin) return false;
    if (std::isfinite(problem.u()[j]) && std::abs(problem.u()[j] - v) < margin) return false;
  }
  return true;
}

double scaled_error(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), kErrorFloor);
}

double BundleErrors::max() const { return std::max({dQ, dp, dA, db, dl, du}); }

BundleErrors& BundleErrors::merge(const BundleErrors& other) {
  dQ = std::max(dQ, other.dQ);
  dp = std::max(dp, other.dp);
  dA = std::max(dA, other.dA);
  db = std::max(db, other.db);
  dl = std::max(dl, other.dl);
  du = std::max(du, other.du);
  return *this;
}

namespace {

template <typename Scale>
double field_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Scale scale) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "bundles have different shapes");
  }
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double x = a.data()[i];
    const double y = b.data()[i];
    worst = std::max(worst, std::abs(x - y) / std::max(scale(x, y), kErrorFloor));
  }
  return worst;
}

template <typename Scale>
BundleErrors compare(const GradientBundle& a, const GradientBundle& b, Scale scale) {
  BundleErrors e;
  e.dQ = field_error(a.dQ, b.dQ, scale);
  e.dp = field_error(a.dp, b.dp, scale);
  e.dA = field_error(a.dA, b.dA, scale);
  e.db = field_error(a.db, b.db, scale);
  e.dl = field_error(a.dl, b.dl, scale);
  e.du = field_error(a.du, b.du, scale);
  return e;
}

}  // namespace

BundleErrors compare_bundles(const GradientBundle& value, const GradientBundle& reference) {
  return compare(value, reference, [](double, double ref) { return std::abs(ref); });
}

BundleErrors compare_bundles_symmetric(const GradientBundle& a, const GradientBundle& b) {
  return compare(a, b, [](double x, double y) { return std::max(std::abs(x), std::abs(y)); });
}

namespace {

double bundle_norm(const GradientBundle& g) {
  return std::sqrt(g.dQ.squaredNorm() + g.dp.squaredNorm() + g.dA.squaredNorm() +
                   g.db.squaredNorm() + g.dl.squaredNorm() + g.du.squaredNorm());
}

}  // namespace

BundleErrors compare_bundles_normwise(const GradientBundle& a, const GradientBundle& b) {
  compare(a, b, [](double, double) { return 1.0; });  // shape check
  const double scale = std::max({bundle_norm(a), bundle_norm(b), std::numeric_limits<double>::min()});
  BundleErrors e;
  e.dQ = (a.dQ - b.dQ).norm() / scale;
  e.dp = (a.dp - b.dp).norm() / scale;
  e.dA = (a.dA - b.dA).norm() / scale;
  e.db = (a.db - b.db).norm() / scale;
  e.dl = (a.dl - b.dl).norm() / scale;
  e.du = (a.du - b.du).norm() / scale;
  return e;
}

}  // namespace admm_layer::oracle
