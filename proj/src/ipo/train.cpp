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

#include <chrono>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "admm_layer/admm/admm.hpp"
#include "admm_layer/core/parallel.hpp"
#include "admm_layer/core/random.hpp"
#include "admm_layer/ipo/ipo.hpp"

namespace admm_layer::ipo {

namespace {

bool skippable(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasibleRecast:
    case ErrorCode::kSingularBackwardSystem:
    case ErrorCode::kDegenerateRisk:
    case ErrorCode::kSingularKKT:
      return true;
    default:
      return false;
  }
}

void check_model(const IPODataset& dataset, const LinearModel& model) {
  if (model.theta.rows() != dataset.num_features() || model.theta.cols() != dataset.num_vars())
    throw Error(ErrorCode::kDimensionMismatch, "theta must be d_w x d_z");
  if (!model.theta.allFinite()) throw Error(ErrorCode::kInvalidArgument, "theta is not finite");
}

Matrix budget_row(Index n) { return Matrix::Ones(1, n); }

// Q and A are the same for every instance of the batch when this returns a
// factorization, so one factorization serves all of them.
std::shared_ptr<const KKTFactorization> shared_factorization(const IPODataset& dataset,
                                                             const LinearModel& model,
                                                             Objective objective, double rho) {
  const Index n = dataset.num_vars();
  try {
    if (objective == Objective::kLearnP && dataset.Q_true.size() == 1)
      return std::make_shared<KKTFactorization>(dataset.Q_true.front(), budget_row(n), rho);
    if (objective == Objective::kMinVariance && dataset.W_cov.size() == 1) {
      const Matrix q = build_covariance(model.theta, dataset.W_cov.front(), dataset.F_diag);
      return std::make_shared<KKTFactorization>(q, budget_row(n), rho);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularKKT) throw;
  }
  return nullptr;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::kLearnP: return "learn-p";
    case Objective::kMaxSharpe: return "max-sharpe";
    case Objective::kMinVariance: return "min-var";
  }
  return "unknown";
}

Objective parse_objective(std::string_view name) {
  if (name == "learn-p") return Objective::kLearnP;
  if (name == "max-sharpe") return Objective::kMaxSharpe;
  if (name == "min-var") return Objective::kMinVariance;
  throw Error(ErrorCode::kInvalidArgument, "unknown objective '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (epochs < 1) fail("epochs must be positive");
  if (batch_size < 1) fail("batch size must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    fail("learning rate must be finite and non-negative");
  if (!(train_eps > 0.0) || !(eval_eps > 0.0)) fail("tolerances must be positive");
  if (eval_eps > train_eps) fail("eval_eps must not exceed train_eps");
  if (!(rho > 0.0)) fail("rho must be positive");
  if (max_iter < 1) fail("max_iter must be positive");
}

QPProblem decision_problem(const IPODataset& dataset, Index i, const LinearModel& model,
                           Objective objective) {
  const Index n = dataset.num_vars();
  const Vector w = dataset.features(i);
  switch (objective) {
    case Objective::kLearnP:
      return validate_problem(dataset.q_true(i), -model.predict(w), budget_row(n), Vector::Ones(1),
                              dataset.l, dataset.u);
    case Objective::kMaxSharpe:
      return max_sharpe_problem(model.predict(w), dataset.q_true(i));
    case Objective::kMinVariance:
      return validate_problem(build_covariance(model.theta, dataset.w_cov(i), dataset.F_diag),
                              Vector::Zero(n), budget_row(n), Vector::Ones(1), dataset.l,
                              dataset.u);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown objective");
}

double realized_loss(const IPODataset& dataset, Index i, const Vector& z, Objective objective) {
  switch (objective) {
    case Objective::kLearnP: return qp_decision_loss(z, dataset.target(i), dataset.q_true(i));
    case Objective::kMaxSharpe: return sharpe_loss(z, dataset.target(i), dataset.q_true(i));
    case Objective::kMinVariance: return min_var_loss(z, dataset.q_true(i));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown objective");
}

namespace {

Vector loss_seed(const IPODataset& dataset, Index i, const Vector& z, Objective objective) {
  switch (objective) {
    case Objective::kLearnP: return qp_decision_loss_seed(z, dataset.target(i), dataset.q_true(i));
    case Objective::kMaxSharpe: return sharpe_loss_seed(z, dataset.target(i), dataset.q_true(i));
    case Objective::kMinVariance: return min_var_loss_seed(z, dataset.q_true(i));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown objective");
}

}  // namespace

InstanceGradient instance_gradient(const IPODataset& dataset, Index i, const LinearModel& model,
                                   Objective objective, const TrainConfig& config,
                                   std::shared_ptr<const KKTFactorization> factorization) {
  const QPProblem problem = decision_problem(dataset, i, model, objective);
  SolverConfig solver = SolverConfig::with_tolerance(config.train_eps, config.rho);
  solver.max_iter = config.max_iter;
  solver.record_trace = config.backward_method == BackwardMethod::kUnrolled;

  InstanceGradient out;
  const auto start = std::chrono::steady_clock::now();
  const QPSolution solution = factorization ? admm_solve(problem, solver, std::move(factorization))
                                            : admm_solve(problem, solver);
  out.forward_seconds = seconds_since(start);
  out.iterations = solution.iterations;
  out.loss = realized_loss(dataset, i, solution.z_star, objective);

  const Vector seed = loss_seed(dataset, i, solution.z_star, objective);
  const TimedGradient timed = backward(problem, solution, seed, config.backward_method);
  out.backward_seconds = timed.seconds;
  const GradientBundle& g = timed.gradient;

  const Vector w = dataset.features(i);
  switch (objective) {
    case Objective::kLearnP:
      // p = -theta' w
      out.d_theta = -w * g.dp.transpose();
      break;
    case Objective::kMaxSharpe:
      // A = (theta' w)'
      out.d_theta = w * g.dA.row(0);
      break;
    case Objective::kMinVariance:
      out.d_theta = dataset.w_cov(i) * model.theta * (g.dQ + g.dQ.transpose());
      break;
  }
  return out;
}

Evaluation evaluate(const IPODataset& dataset, const LinearModel& model, Objective objective,
                    double eps, double rho, int jobs) {
  dataset.validate();
  check_model(dataset, model);
  const Index m = dataset.size();
  const auto factorization = shared_factorization(dataset, model, objective, rho);
  const SolverConfig solver = SolverConfig::with_tolerance(eps, rho);
  std::vector<std::optional<double>> losses(static_cast<std::size_t>(m));
  parallel_for(losses.size(), jobs, [&](std::size_t k) {
    const Index i = static_cast<Index>(k);
    try {
      const QPProblem problem = decision_problem(dataset, i, model, objective);
      const QPSolution solution =
          factorization ? admm_solve(problem, solver, factorization) : admm_solve(problem, solver);
      losses[k] = realized_loss(dataset, i, solution.z_star, objective);
    } catch (const Error& e) {
      if (!skippable(e.code())) throw;
    }
  });
  Evaluation out;
  double total = 0.0;
  int used = 0;
  for (const auto& l : losses) {
    if (l) {
      total += *l;
      ++used;
    } else {
      ++out.skipped;
    }
  }
  out.mean_loss = used > 0 ? total / used : std::numeric_limits<double>::quiet_NaN();
  return out;
}

TrainHistory train(const IPODataset& dataset, const LinearModel& model, Objective objective,
                   const TrainConfig& config) {
  config.validate();
  dataset.validate();
  check_model(dataset, model);
  const Index m = dataset.size();

  TrainHistory history;
  history.model = model;
  history.initial_loss =
      evaluate(dataset, model, objective, config.eval_eps, config.rho, config.jobs).mean_loss;

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  Rng shuffle_rng(config.seed, 1);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t k = order.size(); k > 1; --k)
      std::swap(order[k - 1], order[shuffle_rng.below(k)]);

    double epoch_loss = 0.0;
    int epoch_count = 0;
    double fwd = 0.0;
    double bwd = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const auto factorization =
          shared_factorization(dataset, history.model, objective, config.rho);
      std::vector<std::optional<InstanceGradient>> results(stop - start);
      parallel_for(results.size(), config.jobs, [&](std::size_t k) {
        const Index i = order[start + k];
        try {
          results[k] = instance_gradient(dataset, i, history.model, objective, config, factorization);
        } catch (const Error& e) {
          if (!skippable(e.code())) throw;
          std::clog << "train: skipping instance " << i << " (" << e.what() << ")\n";
        }
      });

      // Summed in batch order so the step does not depend on thread timing.
      Matrix grad = Matrix::Zero(history.model.theta.rows(), history.model.theta.cols());
      int used = 0;
      for (const auto& r : results) {
        if (!r) {
          ++history.skipped_instances;
          continue;
        }
        grad += r->d_theta;
        epoch_loss += r->loss;
        fwd += r->forward_seconds;
        bwd += r->backward_seconds;
        ++used;
      }
      epoch_count += used;
      if (used > 0) history.model.theta -= config.learning_rate * (grad / used);
    }
    history.epoch_loss.push_back(epoch_count > 0 ? epoch_loss / epoch_count
                                                 : std::numeric_limits<double>::quiet_NaN());
    history.forward_seconds.push_back(fwd);
    history.backward_seconds.push_back(bwd);
  }

  history.final_loss = evaluate(dataset, history.model, objective, config.eval_eps, config.rho,
                                config.jobs)
                           .mean_loss;
  return history;
}

}  // namespace admm_layer::ipo
