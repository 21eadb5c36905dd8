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

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "admm_layer/cli/cli.hpp"

namespace admm_layer::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<BackwardMethod> parse_methods(const std::vector<std::string>& names) {
  std::vector<BackwardMethod> methods;
  for (const auto& n : names) methods.push_back(parse_backward_method(n));
  return methods;
}

template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write " + path);
  fn(file);
}

const CLI::Validator kMethodName =
    CLI::IsMember({std::string("fp"), std::string("kkt"), std::string("unroll")});

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Batch differentiable QP layer: benchmarks, gradient checks, training", "admm_layer"};
  app.set_config("--config", "", "TOML/INI file with flag values (command-line flags win)");
  app.require_subcommand(1);

  BenchOptions bench;
  std::vector<std::string> bench_methods{"fp", "kkt", "unroll"};
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Time forward and backward passes on random QPs");
  bench_cmd->add_option("--dims", bench.dims, "Problem sizes d_z")->delimiter(',')->check(CLI::PositiveNumber);
  bench_cmd->add_option("--eps", bench.eps, "Forward tolerances")->delimiter(',')->check(CLI::PositiveNumber);
  bench_cmd->add_option("--batch", bench.batch, "Instances per trial")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--trials", bench.trials, "Trials per (d_z, eps)")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--methods", bench_methods, "Backward engines: fp,kkt,unroll")
      ->delimiter(',')
      ->check(kMethodName);
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads per batch")->check(CLI::PositiveNumber);

  GradcheckOptions grad;
  std::string grad_method = "fp";
  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare a backward engine with finite differences");
  grad_cmd->add_option("--dz", grad.d_z, "Problem size")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--trials", grad.trials, "Instances to check")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--method", grad_method, "fp, kkt or unroll")->check(kMethodName);
  grad_cmd->add_option("--seed", grad.seed, "Random seed");
  grad_cmd->add_option("--tol", grad.tol, "Largest accepted relative error")->check(CLI::NonNegativeNumber);
  grad_cmd->add_option("--eps", grad.forward_eps, "Forward tolerance")->check(CLI::PositiveNumber);

  TrainOptions train;
  std::string objective = "learn-p";
  std::string train_method = "fp";
  std::string train_out;
  auto* train_cmd = app.add_subcommand("train", "Train a linear model through the QP layer");
  train_cmd->add_option("--objective", objective, "learn-p, max-sharpe or min-var")
      ->check(CLI::IsMember({std::string("learn-p"), std::string("max-sharpe"), std::string("min-var")}));
  train_cmd->add_option("--dz", train.d_z, "Decision size")->check(CLI::PositiveNumber);
  train_cmd->add_option("--dw", train.d_w, "Feature count")->check(CLI::PositiveNumber);
  train_cmd->add_option("--m", train.m, "Training instances")->check(CLI::PositiveNumber);
  train_cmd->add_option("--snr", train.snr, "Signal-to-noise variance ratio");
  train_cmd->add_option("--epochs", train.config.epochs, "Epochs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch", train.config.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train.config.learning_rate, "Learning rate")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--method", train_method, "fp, kkt or unroll")->check(kMethodName);
  train_cmd->add_option("--seed", train.config.seed, "Random seed");
  train_cmd->add_option("--jobs", train.config.jobs, "Worker threads per batch")->check(CLI::PositiveNumber);
  train_cmd->add_option("--out", train_out, "History CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*bench_cmd) {
      bench.methods = parse_methods(bench_methods);
      const BenchReport report = run_bench(bench);
      with_output(bench_out, out, [&](std::ostream& os) { write_bench_csv(os, report); });
      return kExitOk;
    }
    if (*grad_cmd) {
      grad.method = parse_backward_method(grad_method);
      const GradcheckReport report = run_gradcheck(grad);
      auto print = [&](const char* label, const oracle::BundleErrors& e) {
        out << label << "  dQ " << e.dQ << "  dp " << e.dp << "  dA " << e.dA << "  db " << e.db
            << "  dl " << e.dl << "  du " << e.du << "\n";
      };
      out << std::setprecision(3) << "method " << grad_method << " d_z " << grad.d_z << " eps "
          << grad.forward_eps << "\n";
      print("relative error (bundle norm)", report.errors);
      print("relative error (per entry)  ", report.entrywise);
      out << "checked " << report.checked << "  skipped " << report.skipped << "\n"
          << (report.passed ? "PASS" : "FAIL") << " (tol " << grad.tol << ")\n";
      return report.passed ? kExitOk : kExitFailure;
    }
    if (*train_cmd) {
      train.objective = ipo::parse_objective(objective);
      train.config.backward_method = parse_backward_method(train_method);
      const ipo::TrainHistory history = run_train(train);
      const auto rows = train_rows(history);
      with_output(train_out, out, [&](std::ostream& os) { write_train_csv(os, rows); });
      std::ostream& summary = train_out.empty() ? err : out;
      summary << std::setprecision(8) << "initial loss " << history.initial_loss << "\n"
              << "final loss   " << history.final_loss << "\n";
      if (history.skipped_instances > 0)
        summary << "skipped instances " << history.skipped_instances << "\n";
      return history.final_loss < history.initial_loss ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitFailure;
  }
  return kExitUsage;
}

}  // namespace admm_layer::cli
