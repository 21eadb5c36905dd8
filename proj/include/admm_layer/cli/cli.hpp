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
#include <iosfwd>
#include <string>
#include <vector>

#include "admm_layer/diff/diff.hpp"
#include "admm_layer/ipo/ipo.hpp"
#include "admm_layer/oracle/oracle.hpp"

namespace admm_layer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// ---- bench ----------------------------------------------------------------

/// One row per (d_z, eps_tol, trial, method). Times and iterations are summed
/// over the batch; `converged` counts converged instances.
struct BenchRow {
  Index d_z = 0;
  std::string method;
  double eps_tol = 0.0;
  int trial = 0;
  double forward_seconds = 0.0;
  double backward_seconds = 0.0;
  long iterations = 0;
  int converged = 0;

  bool operator==(const BenchRow&) const = default;
};

struct BenchReport {
  int jobs = 1;
  std::vector<BenchRow> rows;

  bool operator==(const BenchReport&) const = default;
};

struct BenchOptions {
  std::vector<Index> dims{10};
  std::vector<double> eps{1e-3};
  int batch = 128;
  int trials = 10;
  std::vector<BackwardMethod> methods{BackwardMethod::kFixedPoint, BackwardMethod::kKKTImplicit,
                                      BackwardMethod::kUnrolled};
  std::uint64_t seed = 0;
  int jobs = 1;
  int max_iter = 10000;
};

/// Problem seed of instance `index` of a trial.
std::uint64_t bench_instance_seed(std::uint64_t seed, Index d_z, int trial, int index);

BenchReport run_bench(const BenchOptions& options);

// Bench CSV: a "# jobs=N" comment line, then the header
//   d_z,method,eps_tol,trial,forward_seconds,backward_seconds,iterations,converged
// and one line per row. Reals are written with 17 significant digits.
inline constexpr const char* kBenchHeader =
    "d_z,method,eps_tol,trial,forward_seconds,backward_seconds,iterations,converged";
void write_bench_csv(std::ostream& out, const BenchReport& report);
BenchReport read_bench_csv(std::istream& in);

// ---- gradcheck ------------------------------------------------------------

struct GradcheckOptions {
  Index d_z = 10;
  int trials = 20;
  BackwardMethod method = BackwardMethod::kFixedPoint;
  std::uint64_t seed = 0;
  double tol = 1e-4;
  double forward_eps = 1e-8;
  double fd_step = 1e-5;
  double rho = 1.0;
};

struct GradcheckReport {
  oracle::BundleErrors errors;       // bundle-normalized, worst over checked instances
  oracle::BundleErrors entrywise;    // per-entry scaled error, worst over checked instances
  int checked = 0;
  int skipped = 0;
  bool passed = false;
};

/// Central differences through the reference solver against the chosen
/// backward engine on `trials` strictly complementary instances. The pass
/// test uses the bundle-normalized error (oracle::compare_bundles_normwise);
/// the per-entry error is reported alongside. Instances
/// that are not strictly complementary (or do not converge) are skipped;
/// at most 10 * trials candidates are drawn.
GradcheckReport run_gradcheck(const GradcheckOptions& options);

// ---- train ----------------------------------------------------------------

struct TrainOptions {
  ipo::Objective objective = ipo::Objective::kLearnP;
  Index d_z = 50;
  Index d_w = 5;
  Index m = 640;
  double snr = 0.1;
  ipo::TrainConfig config;
};

struct TrainRow {
  int epoch = 0;
  double mean_loss = 0.0;
  double fwd_seconds = 0.0;
  double bwd_seconds = 0.0;

  bool operator==(const TrainRow&) const = default;
};

/// Generates the synthetic dataset for the objective (seeded by
/// config.seed) and trains from a small random theta.
ipo::TrainHistory run_train(const TrainOptions& options);

/// Epoch 0 is the initial full-data loss (zero times); epochs 1..E are the
/// per-epoch mean training losses.
std::vector<TrainRow> train_rows(const ipo::TrainHistory& history);

inline constexpr const char* kTrainHeader = "epoch,mean_loss,fwd_seconds,bwd_seconds";
void write_train_csv(std::ostream& out, const std::vector<TrainRow>& rows);
std::vector<TrainRow> read_train_csv(std::istream& in);

// ---- entry point ----------------------------------------------------------

/// admm_layer bench|gradcheck|train [flags]. Flags may also come from a
/// TOML/INI file given with --config; flags on the command line win.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace admm_layer::cli
