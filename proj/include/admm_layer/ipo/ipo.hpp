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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "admm_layer/admm/kkt_factorization.hpp"
#include "admm_layer/core/problem.hpp"
#include "admm_layer/diff/diff.hpp"

namespace admm_layer::ipo {

/// Linear prediction map: prediction = theta' w, theta is (d_w x d_z).
struct LinearModel {
  Matrix theta;

  Vector predict(const Vector& w) const { return theta.transpose() * w; }

  /// Entries N(0, variance), seeded.
  static LinearModel random_init(Index d_w, Index d_z, std::uint64_t seed, double variance = 0.01);
};

/// Synthetic predict-and-optimize data.
///
/// Row i of W is the feature vector w_i and row i of P the realized cost (or
/// return) vector. Q_true and W_cov hold either one matrix shared by every
/// instance or one per instance.
struct IPODataset {
  Matrix W;
  Matrix P;
  std::vector<Matrix> Q_true;
  std::vector<Matrix> W_cov;
  Vector F_diag;  // residual variances for the factor covariance model
  Vector l;       // box used by the learn-p decision problem
  Vector u;
  Matrix theta0;
  double tau = 0.0;
  double snr = 0.0;

  Index size() const noexcept { return W.rows(); }
  Index num_features() const noexcept { return W.cols(); }
  Index num_vars() const noexcept { return P.cols(); }

  const Matrix& q_true(Index i) const;
  const Matrix& w_cov(Index i) const;
  Vector features(Index i) const { return W.row(i).transpose(); }
  Vector target(Index i) const { return P.row(i).transpose(); }

  void validate() const;
};

/// Toeplitz correlation with entry (j, k) equal to decay^|j-k|.
Matrix toeplitz_correlation(Index n, double decay);

/// Learn-p data: w_i ~ N(0, I), eps_i ~ N(0, Q) with Q_jk = 0.5^|j-k|,
/// p_i = theta0' w_i + tau eps_i, tau set so that the pooled sample variance
/// of the signal over that of the noise equals snr. Bounds l ~ U[-1, 0] and
/// u ~ U[0, 1]. P is rescaled to unit pooled standard deviation (theta0 and
/// tau scaled along with it).
///
/// Streams: 0 -> theta0, 1 -> W, 2 -> eps, 3 -> l, 4 -> u.
IPODataset generate_exp2_dataset(Index d_z, Index d_w, Index m, double snr, std::uint64_t seed);

/// Factor-return data for the portfolio objectives: returns generated as in
/// generate_exp2_dataset, with Q_true the population return covariance
/// theta0' theta0 + tau^2 Q, W_cov = I (the factor covariance), and F_diag the
/// per-asset residual variance of an OLS fit. Bounds are [0, 1].
IPODataset generate_factor_dataset(Index d_z, Index d_w, Index m, double snr, std::uint64_t seed);

/// Realized decision loss z'p + 0.5 z'Qz; seed p + Qz.
double qp_decision_loss(const Vector& z, const Vector& p_true, const Matrix& Q_true);
Vector qp_decision_loss_seed(const Vector& z, const Vector& p_true, const Matrix& Q_true);

/// Negative realized Sharpe ratio -(a'z) / sqrt(z'Qz). Throws DegenerateRisk
/// when z'Qz <= 1e-14.
double sharpe_loss(const Vector& z, const Vector& a_true, const Matrix& Q_true);
Vector sharpe_loss_seed(const Vector& z, const Vector& a_true, const Matrix& Q_true);

/// Realized variance z'Qz; seed 2Qz.
double min_var_loss(const Vector& z, const Matrix& Q_true);
Vector min_var_loss_seed(const Vector& z, const Matrix& Q_true);

/// Convex recast of the long-only max-Sharpe problem:
///   minimize 0.5 z'Qz  s.t.  a_hat'z = 1, z >= 0.
/// Throws InfeasibleRecast when no entry of a_hat is positive.
QPProblem max_sharpe_problem(const Vector& a_hat, const Matrix& Q);

/// z / sum(z). Throws ZeroSum when |sum(z)| <= 1e-12.
Vector normalize_weights(const Vector& z);

/// theta' W_cov theta + diag(F_diag). Throws NonPositiveResidualVariance
/// unless every F_diag entry is positive.
Matrix build_covariance(const Matrix& theta, const Matrix& W_cov, const Vector& F_diag);

/// Column-wise least squares of P on W. Throws RankDeficientFeatures.
LinearModel ols_fit(const IPODataset& dataset);

enum class Objective { kLearnP, kMaxSharpe, kMinVariance };

/// "learn-p", "max-sharpe", "min-var".
std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);

struct TrainConfig {
  int epochs = 30;
  int batch_size = 32;
  double learning_rate = 0.05;
  BackwardMethod backward_method = BackwardMethod::kFixedPoint;
  double train_eps = 1e-4;
  double eval_eps = 1e-6;
  double rho = 1.0;
  int max_iter = 10000;
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;
};

struct TrainHistory {
  double initial_loss = 0.0;  // full-data mean loss before training, at eval_eps
  double final_loss = 0.0;    // full-data mean loss after training, at eval_eps
  std::vector<double> epoch_loss;
  std::vector<double> forward_seconds;
  std::vector<double> backward_seconds;
  LinearModel model;
  int skipped_instances = 0;
};

/// The decision problem of instance i under the given model.
QPProblem decision_problem(const IPODataset& dataset, Index i, const LinearModel& model,
                           Objective objective);

/// Realized loss of a decision for instance i.
double realized_loss(const IPODataset& dataset, Index i, const Vector& z, Objective objective);

struct InstanceGradient {
  double loss = 0.0;
  Matrix d_theta;
  double forward_seconds = 0.0;
  double backward_seconds = 0.0;
  int iterations = 0;
};

/// Forward solve, realized loss, backward pass and chain rule into theta for
/// one instance. `factorization` may be shared when (Q, A, rho) are the same
/// for every instance; pass null to factor per instance.
InstanceGradient instance_gradient(const IPODataset& dataset, Index i, const LinearModel& model,
                                   Objective objective, const TrainConfig& config,
                                   std::shared_ptr<const KKTFactorization> factorization = nullptr);

struct Evaluation {
  double mean_loss = 0.0;
  int skipped = 0;
};

/// Mean realized loss of the model's decisions over the dataset, solved at
/// `eps`. Instances whose problem cannot be formed or solved are skipped.
Evaluation evaluate(const IPODataset& dataset, const LinearModel& model, Objective objective,
                    double eps, double rho = 1.0, int jobs = 1);

/// Mini-batch SGD on theta through the decision layer.
TrainHistory train(const IPODataset& dataset, const LinearModel& model, Objective objective,
                   const TrainConfig& config);

// Dataset files: the JSON problem format extended with the dataset fields,
// and a CSV with one row per instance (columns w_0..w_{d_w-1},
// p_0..p_{d_z-1}).
void save_dataset(const std::filesystem::path& path, const IPODataset& dataset);
IPODataset load_dataset(const std::filesystem::path& path);
void write_dataset_csv(std::ostream& out, const IPODataset& dataset);
void read_dataset_csv(std::istream& in, Index d_w, Index d_z, Matrix& W, Matrix& P);

}  // namespace admm_layer::ipo
