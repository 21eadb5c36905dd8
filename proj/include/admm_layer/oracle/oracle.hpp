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

#include <functional>
#include <string_view>

#include "admm_layer/core/problem.hpp"

/// Ground-truth machinery for tests and acceptance runs. Nothing here calls
/// into the ADMM solver or the backward engines.
namespace admm_layer::oracle {

/// Dense dual active-set solve (Goldfarb-Idnani) of a strictly convex QP,
/// followed by one exact KKT solve on the final active set.
///
/// Multipliers are reported in the ADMM convention
///   p + Q z + A' eta + rho mu = 0,
/// so `rho` only scales mu; v_star = z + mu. iterations counts active-set
/// changes. converged is always true on return.
///
/// Throws SingularKKT if Q is not positive definite or A is rank deficient,
/// InvalidArgument if the constraints are infeasible, and CyclingDetected if
/// the active-set loop exceeds d_z * 2^min(d_z, 20) steps.
QPSolution reference_solve(const QPProblem& problem, double rho = 1.0);

enum class ProblemField { kQ, kP, kA, kB, kL, kU };

std::string_view to_string(ProblemField field);

struct FDSpec {
  ProblemField target = ProblemField::kP;
  Index row = 0;
  Index col = 0;  // only used for Q and A
  double step = 1e-5;
};

using LossFn = std::function<double(const Vector& z)>;

/// Central difference of loss(z*(theta)) through reference_solve. An
/// off-diagonal Q entry (j, k) moves (j, k) and (k, j) by step/2 each so the
/// perturbed Q stays symmetric. Perturbing an infinite bound returns 0.
double fd_gradient(const QPProblem& problem, const LossFn& loss, const FDSpec& spec);

/// fd_gradient for every entry of every field.
GradientBundle fd_bundle(const QPProblem& problem, const LossFn& loss, double step = 1e-5);

struct KKTResiduals {
  double stationarity = 0.0;     // ||p + Qz + A'eta + rho mu||_inf
  double equality = 0.0;         // ||Az - b||_inf
  double bounds = 0.0;           // max violation of l <= z <= u
  double complementarity = 0.0;  // max lambda_-(z - l), lambda_+(u - z)

  double max() const;
};

KKTResiduals kkt_residuals(const QPProblem& problem, const Vector& z, const Vector& eta,
                           const Vector& mu, double rho);
KKTResiduals kkt_residuals(const QPProblem& problem, const QPSolution& solution);

/// True when every finite bound is either inactive by at least `margin` or
/// active with multiplier at least `margin` (equivalently, v = z + lambda_+ -
/// lambda_- stays `margin` away from every finite bound). The solution map is
/// differentiable with a locally fixed active set there.
bool strictly_complementary(const QPProblem& problem, const QPSolution& solution,
                            double margin = 1e-3);

/// Absolute floor of the error metric, as a fraction of the relative
/// tolerance: |a - f| is scaled by max(|f|, kErrorFloor). With a relative
/// tolerance of 1e-4 this is an absolute floor of 1e-7.
inline constexpr double kErrorFloor = 1e-3;

double scaled_error(double value, double reference);

struct BundleErrors {
  double dQ = 0.0;
  double dp = 0.0;
  double dA = 0.0;
  double db = 0.0;
  double dl = 0.0;
  double du = 0.0;

  double max() const;
  BundleErrors& merge(const BundleErrors& other);  // elementwise max
};

/// Largest scaled_error per field, measured against `reference`.
BundleErrors compare_bundles(const GradientBundle& value, const GradientBundle& reference);

/// Symmetric variant for comparing two engines: the scale is the larger of
/// the two magnitudes.
BundleErrors compare_bundles_symmetric(const GradientBundle& a, const GradientBundle& b);

/// Per-field Euclidean deviation ||a_f - b_f|| divided by the norm of the
/// larger bundle (all six fields stacked). Entries that are exactly zero in
/// one engine and tiny in the other do not dominate this measure.
BundleErrors compare_bundles_normwise(const GradientBundle& a, const GradientBundle& b);

}  // namespace admm_layer::oracle
