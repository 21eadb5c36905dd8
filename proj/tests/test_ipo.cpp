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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "admm_layer/admm/admm.hpp"
#include "admm_layer/core/random.hpp"
#include "admm_layer/ipo/ipo.hpp"
#include "admm_layer/oracle/oracle.hpp"

using namespace admm_layer;
using namespace admm_layer::ipo;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

template <typename F>
Vector fd_vector(F f, const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    Vector xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    g[j] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

double pooled_variance(const Matrix& m) {
  const double mean = m.mean();
  return (m.array() - mean).square().sum() / (static_cast<double>(m.size()) - 1.0);
}

// Mean realized loss with decisions from the reference solver.
double oracle_mean_loss(const IPODataset& data, const LinearModel& model, Objective objective) {
  double total = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    const QPProblem prob = decision_problem(data, i, model, objective);
    total += realized_loss(data, i, oracle::reference_solve(prob).z_star, objective);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("Toeplitz ground-truth covariance") {
  Matrix expected(3, 3);
  expected << 1, .5, .25, .5, 1, .5, .25, .5, 1;
  const IPODataset d = generate_exp2_dataset(3, 2, 10, 0.1, 1);
  CHECK((d.q_true(0) - expected).norm() < 1e-15);
  CHECK((d.q_true(7) - expected).norm() < 1e-15);
}

TEST_CASE("generate_exp2_dataset") {
  const IPODataset a = generate_exp2_dataset(6, 3, 50, 0.1, 9);
  const IPODataset b = generate_exp2_dataset(6, 3, 50, 0.1, 9);
  CHECK(a.W == b.W);
  CHECK(a.P == b.P);
  CHECK(a.l == b.l);
  CHECK(a.theta0 == b.theta0);
  CHECK(generate_exp2_dataset(6, 3, 50, 0.1, 10).P != a.P);
  CHECK(a.size() == 50);
  CHECK(a.num_features() == 3);
  CHECK(a.num_vars() == 6);
  CHECK((a.l.array() >= -1).all());
  CHECK((a.l.array() <= 0).all());
  CHECK((a.u.array() >= 0).all());
  CHECK((a.u.array() <= 1).all());
  CHECK(std::abs(pooled_variance(a.P) - 1.0) < 1e-12);
  CHECK_THROWS_AS(generate_exp2_dataset(6, 3, 50, 0.0, 9), Error);
  CHECK_THROWS_AS(generate_exp2_dataset(6, 3, 50, 1.5, 9), Error);
  CHECK_THROWS_AS(generate_exp2_dataset(0, 3, 50, 0.1, 9), Error);
}

TEST_CASE("signal-to-noise calibration") {
  const IPODataset d = generate_exp2_dataset(10, 5, 1000, 0.1, 3);
  const Matrix signal = d.W * d.theta0;
  const Matrix noise = d.P - signal;
  const double ratio = pooled_variance(signal) / pooled_variance(noise);
  CHECK(ratio >= 0.08);
  CHECK(ratio <= 0.12);
}

TEST_CASE("decision loss") {
  CHECK(qp_decision_loss(Vector::Zero(2), vec({2, 0}), Matrix::Identity(2, 2)) == 0.0);
  CHECK(qp_decision_loss(vec({1, 0}), vec({2, 0}), Matrix::Identity(2, 2)) == 2.5);
  const IPODataset d = generate_exp2_dataset(5, 2, 3, 0.1, 1);
  const Vector z = vec({0.1, -0.3, 0.5, 0.2, 0.9});
  const Vector p = d.target(1);
  const Vector fd = fd_vector([&](const Vector& x) { return qp_decision_loss(x, p, d.q_true(1)); }, z);
  CHECK((qp_decision_loss_seed(z, p, d.q_true(1)) - fd).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK_THROWS_AS(qp_decision_loss(z, vec({1}), d.q_true(1)), Error);
}

TEST_CASE("Sharpe loss") {
  CHECK(sharpe_loss(vec({1, 0}), vec({0.1, 0}), Matrix::Identity(2, 2)) == doctest::Approx(-0.1));
  const Matrix Q = generate_exp2_dataset(4, 2, 3, 0.1, 2).q_true(0);
  const Vector a = vec({0.3, -0.1, 0.2, 0.05});
  const Vector z = vec({0.2, 0.5, 0.1, 0.4});
  for (double c : {0.5, 2.0, 10.0}) CHECK(std::abs(sharpe_loss(c * z, a, Q) - sharpe_loss(z, a, Q)) <= 1e-12);
  const Vector fd = fd_vector([&](const Vector& x) { return sharpe_loss(x, a, Q); }, z);
  CHECK((sharpe_loss_seed(z, a, Q) - fd).lpNorm<Eigen::Infinity>() < 1e-7);
  try {
    sharpe_loss(Vector::Zero(4), a, Q);
    FAIL("expected DegenerateRisk");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateRisk);
  }
}

TEST_CASE("minimum-variance loss") {
  CHECK(min_var_loss(Vector::Zero(2), Matrix::Identity(2, 2)) == 0.0);
  Matrix Q = vec({4, 1}).asDiagonal();
  CHECK(min_var_loss(vec({1, 0}), Q) == 4.0);
  const Matrix S = generate_exp2_dataset(4, 2, 3, 0.1, 2).q_true(0);
  const Vector z = vec({0.2, 0.5, 0.1, 0.4});
  const Vector fd = fd_vector([&](const Vector& x) { return min_var_loss(x, S); }, z);
  CHECK((min_var_loss_seed(z, S) - fd).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("max-Sharpe recast") {
  const QPProblem sym = max_sharpe_problem(vec({1, 1}), Matrix::Identity(2, 2));
  const QPSolution s = admm_solve(sym, SolverConfig::with_tolerance(1e-10));
  CHECK((s.z_star - vec({0.5, 0.5})).norm() < 1e-8);
  CHECK((normalize_weights(s.z_star) - vec({0.5, 0.5})).norm() < 1e-8);
  CHECK(sym.u()[0] == kInf);
  CHECK(sym.l()[1] == 0.0);

  const QPProblem one = max_sharpe_problem(vec({2}), Matrix::Identity(1, 1));
  const QPSolution o = admm_solve(one, SolverConfig::with_tolerance(1e-10));
  CHECK(o.z_star[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(normalize_weights(o.z_star)[0] == doctest::Approx(1.0));

  try {
    max_sharpe_problem(vec({-1, 0}), Matrix::Identity(2, 2));
    FAIL("expected InfeasibleRecast");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasibleRecast);
  }
}

TEST_CASE("normalize_weights") {
  CHECK(normalize_weights(vec({0.5, 0.5})) == vec({0.5, 0.5}));
  CHECK(normalize_weights(vec({2, 2})) == vec({0.5, 0.5}));
  CHECK(normalize_weights(vec({-1, -3})) == vec({0.25, 0.75}));
  try {
    normalize_weights(vec({1, -1 + 1e-13}));
    FAIL("expected ZeroSum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroSum);
  }
}

TEST_CASE("build_covariance") {
  CHECK(build_covariance(Matrix::Identity(2, 2), Matrix::Identity(2, 2), vec({1, 1})) ==
        Matrix(2 * Matrix::Identity(2, 2)));
  CHECK(build_covariance(Matrix::Zero(2, 3), Matrix::Identity(2, 2), vec({1, 2, 3})) ==
        Matrix(vec({1, 2, 3}).asDiagonal()));
  Rng rng(4);
  const Matrix theta = rng.normal_matrix(2, 3);
  const Matrix B = rng.normal_matrix(2, 2);
  const Matrix q = build_covariance(theta, B * B.transpose(), vec({0.1, 0.2, 0.3}));
  CHECK(q == q.transpose());
  CHECK(q.llt().info() == Eigen::Success);
  try {
    build_covariance(theta, Matrix::Identity(2, 2), vec({0.1, 0.0, 0.3}));
    FAIL("expected NonPositiveResidualVariance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonPositiveResidualVariance);
  }
}

TEST_CASE("ols_fit") {
  IPODataset d = generate_exp2_dataset(4, 3, 40, 0.1, 5);
  d.P = d.W * d.theta0;
  CHECK((ols_fit(d).theta - d.theta0).lpNorm<Eigen::Infinity>() < 1e-10);

  const IPODataset noisy = generate_exp2_dataset(4, 3, 40, 0.1, 5);
  const Matrix R = noisy.P - noisy.W * ols_fit(noisy).theta;
  CHECK((noisy.W.transpose() * R).lpNorm<Eigen::Infinity>() <= 1e-8);

  IPODataset dup = noisy;
  dup.W.col(2) = dup.W.col(0);
  try {
    ols_fit(dup);
    FAIL("expected RankDeficientFeatures");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRankDeficientFeatures);
  }
  IPODataset tiny = generate_exp2_dataset(4, 3, 3, 0.1, 5);
  CHECK_THROWS_AS(ols_fit(tiny), Error);
}

TEST_CASE("factor dataset") {
  const IPODataset d = generate_factor_dataset(6, 2, 100, 0.1, 4);
  CHECK(d.Q_true.size() == 1);
  CHECK(d.W_cov.size() == 1);
  CHECK((d.F_diag.array() > 0).all());
  CHECK(d.l == Vector::Zero(6));
  CHECK(d.u == Vector::Ones(6));
  CHECK(d.q_true(0).llt().info() == Eigen::Success);
  // Population return covariance against the sample covariance.
  const IPODataset big = generate_factor_dataset(4, 2, 20000, 0.5, 4);
  const Matrix centered = big.P.rowwise() - big.P.colwise().mean();
  const Matrix sample = centered.transpose() * centered / (big.size() - 1.0);
  CHECK((sample - big.q_true(0)).lpNorm<Eigen::Infinity>() < 0.05 * big.q_true(0).maxCoeff());
}

TEST_CASE("objective names") {
  for (Objective o : {Objective::kLearnP, Objective::kMaxSharpe, Objective::kMinVariance})
    CHECK(parse_objective(to_string(o)) == o);
  CHECK_THROWS_AS(parse_objective("max-return"), Error);
}

TEST_CASE("instance gradients match finite differences through the oracle") {
  const IPODataset d2 = generate_exp2_dataset(5, 2, 8, 0.1, 11);
  const IPODataset df = generate_factor_dataset(5, 2, 8, 0.1, 11);
  TrainConfig cfg;
  cfg.train_eps = 1e-10;
  cfg.eval_eps = 1e-10;
  for (Objective obj : {Objective::kLearnP, Objective::kMaxSharpe, Objective::kMinVariance}) {
    CAPTURE(to_string(obj));
    const IPODataset& data = obj == Objective::kLearnP ? d2 : df;
    LinearModel model = obj == Objective::kMaxSharpe ? LinearModel{data.theta0}
                                                      : LinearModel::random_init(2, 5, 3, 0.25);
    Matrix grad = Matrix::Zero(2, 5);
    int used = 0;
    for (Index i = 0; i < data.size(); ++i) {
      try {
        const QPProblem prob = decision_problem(data, i, model, obj);
        const QPSolution sol = admm_solve(prob, SolverConfig::with_tolerance(1e-10));
        if (!oracle::strictly_complementary(prob, sol)) continue;
        grad += instance_gradient(data, i, model, obj, cfg).d_theta;
        ++used;
        IPODataset one = data;
        one.W = data.W.row(i);
        one.P = data.P.row(i);
        const double h = 1e-6;
        Matrix fd(2, 5);
        for (Index r = 0; r < 2; ++r) {
          for (Index c = 0; c < 5; ++c) {
            LinearModel mp = model, mm = model;
            mp.theta(r, c) += h;
            mm.theta(r, c) -= h;
            fd(r, c) = (oracle_mean_loss(one, mp, obj) - oracle_mean_loss(one, mm, obj)) / (2 * h);
          }
        }
        const Matrix g = instance_gradient(data, i, model, obj, cfg).d_theta;
        CHECK((g - fd).lpNorm<Eigen::Infinity>() <= 1e-3 * std::max(1.0, fd.lpNorm<Eigen::Infinity>()));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInfeasibleRecast) throw;
      }
    }
    CHECK(used >= 3);
  }
}

TEST_CASE("training with zero learning rate leaves theta unchanged") {
  const IPODataset d = generate_exp2_dataset(5, 2, 20, 0.1, 1);
  const LinearModel init = LinearModel::random_init(2, 5, 1);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 6;
  cfg.learning_rate = 0.0;
  const TrainHistory h = train(d, init, Objective::kLearnP, cfg);
  CHECK(h.model.theta == init.theta);
  REQUIRE(h.epoch_loss.size() == 3);
  CHECK(h.forward_seconds.size() == 3);
  CHECK(h.backward_seconds.size() == 3);
  CHECK(h.epoch_loss[1] == doctest::Approx(h.epoch_loss[0]).epsilon(1e-12));
  CHECK(h.epoch_loss[2] == doctest::Approx(h.epoch_loss[0]).epsilon(1e-12));
  CHECK(h.final_loss == h.initial_loss);
}

TEST_CASE("starting at the generating parameter on noiseless data") {
  IPODataset d = generate_exp2_dataset(6, 3, 30, 0.1, 8);
  d.P = d.W * d.theta0;
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.eval_eps = 1e-9;
  const TrainHistory h = train(d, LinearModel{d.theta0}, Objective::kLearnP, cfg);
  const double truth = oracle_mean_loss(d, LinearModel{d.theta0}, Objective::kLearnP);
  CHECK(std::abs(h.initial_loss - truth) <= 1e-6);
}

TEST_CASE("training is deterministic and independent of thread count") {
  const IPODataset d = generate_exp2_dataset(8, 3, 40, 0.1, 2);
  const LinearModel init = LinearModel::random_init(3, 8, 2);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  const TrainHistory a = train(d, init, Objective::kLearnP, cfg);
  cfg.jobs = 3;
  const TrainHistory b = train(d, init, Objective::kLearnP, cfg);
  CHECK(a.model.theta == b.model.theta);
  CHECK(a.epoch_loss == b.epoch_loss);
}

TEST_CASE("batch gradient is the mean of instance gradients") {
  const IPODataset d = generate_exp2_dataset(6, 2, 5, 0.1, 6);
  const LinearModel init = LinearModel::random_init(2, 6, 4, 1.0);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 5;
  cfg.learning_rate = 1.0;
  Matrix mean = Matrix::Zero(2, 6);
  for (Index i = 0; i < 5; ++i) mean += instance_gradient(d, i, init, Objective::kLearnP, cfg).d_theta;
  mean /= 5.0;
  const TrainHistory h = train(d, init, Objective::kLearnP, cfg);
  CHECK((h.model.theta - (init.theta - mean)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("full-batch descent is monotone for a small step") {
  const IPODataset d = generate_exp2_dataset(5, 2, 16, 0.1, 12);
  LinearModel model = LinearModel::random_init(2, 5, 9);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.01;
  cfg.train_eps = 1e-9;
  cfg.eval_eps = 1e-9;
  double previous = evaluate(d, model, Objective::kLearnP, 1e-9).mean_loss;
  for (int step = 0; step < 5; ++step) {
    model = train(d, model, Objective::kLearnP, cfg).model;
    const double now = evaluate(d, model, Objective::kLearnP, 1e-9).mean_loss;
    CHECK(now <= previous + 1e-12);
    previous = now;
  }
}

TEST_CASE("infeasible max-Sharpe instances are skipped") {
  IPODataset d = generate_factor_dataset(3, 2, 6, 0.1, 1);
  LinearModel model{Matrix::Zero(2, 3)};
  model.theta(0, 0) = 1.0;  // a_hat = (w_0, 0, 0): infeasible when w_0 <= 0
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 6;
  const int negative = static_cast<int>((d.W.col(0).array() <= 0).count());
  REQUIRE(negative > 0);
  const TrainHistory h = train(d, model, Objective::kMaxSharpe, cfg);
  CHECK(h.skipped_instances == negative);
  CHECK(evaluate(d, model, Objective::kMaxSharpe, 1e-6).skipped == negative);
}

TEST_CASE("TrainConfig validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.eval_eps = 1e-3;
  CHECK_THROWS_AS(c.validate(), Error);
  c = TrainConfig{};
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = TrainConfig{};
  c.learning_rate = -1;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("dataset files round trip") {
  const IPODataset d = generate_factor_dataset(4, 2, 12, 0.1, 3);
  const auto path = std::filesystem::temp_directory_path() / "admm_layer_dataset_test.json";
  save_dataset(path, d);
  const IPODataset back = load_dataset(path);
  std::filesystem::remove(path);
  CHECK(back.W == d.W);
  CHECK(back.P == d.P);
  CHECK(back.q_true(0) == d.q_true(0));
  CHECK(back.w_cov(0) == d.w_cov(0));
  CHECK(back.F_diag == d.F_diag);
  CHECK(back.theta0 == d.theta0);
  CHECK(back.tau == d.tau);

  std::stringstream csv;
  write_dataset_csv(csv, d);
  CHECK(csv.str().rfind("w_0,w_1,p_0,p_1,p_2,p_3\n", 0) == 0);
  Matrix W, P;
  read_dataset_csv(csv, 2, 4, W, P);
  CHECK(W == d.W);
  CHECK(P == d.P);
}
