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
#include <vector>

#include "admm_layer/admm/admm.hpp"
#include "admm_layer/cli/cli.hpp"
#include "admm_layer/core/generate.hpp"
#include "admm_layer/core/parallel.hpp"
#include "admm_layer/core/random.hpp"

namespace admm_layer::cli {

std::uint64_t bench_instance_seed(std::uint64_t seed, Index d_z, int trial, int index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(d_z));
  h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
  return splitmix64(h ^ static_cast<std::uint64_t>(index));
}

namespace {

struct InstanceTiming {
  double forward = 0.0;
  double backward = 0.0;
  int iterations = 0;
  bool converged = false;
};

}  // namespace

BenchReport run_bench(const BenchOptions& options) {
  if (options.dims.empty() || options.eps.empty() || options.methods.empty())
    throw Error(ErrorCode::kInvalidArgument, "bench needs at least one dim, eps and method");
  if (options.batch < 1 || options.trials < 1)
    throw Error(ErrorCode::kInvalidArgument, "batch and trials must be positive");

  BenchReport report;
  report.jobs = options.jobs;
  for (const Index d_z : options.dims) {
    for (const double eps : options.eps) {
      for (int trial = 0; trial < options.trials; ++trial) {
        std::vector<QPProblem> problems;
        std::vector<Vector> seeds;
        for (int b = 0; b < options.batch; ++b) {
          const std::uint64_t s = bench_instance_seed(options.seed, d_z, trial, b);
          problems.push_back(generate_exp1_problem(d_z, s));
          seeds.push_back(Rng(s, 9).normal_vector(d_z));
        }
        for (const BackwardMethod method : options.methods) {
          SolverConfig solver = SolverConfig::with_tolerance(eps);
          solver.max_iter = options.max_iter;
          solver.record_trace = method == BackwardMethod::kUnrolled;
          std::vector<InstanceTiming> timings(problems.size());
          parallel_for(problems.size(), options.jobs, [&](std::size_t k) {
            const auto start = std::chrono::steady_clock::now();
            const QPSolution solution = admm_solve(problems[k], solver);
            timings[k].forward =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            timings[k].iterations = solution.iterations;
            timings[k].converged = solution.converged;
            timings[k].backward = backward(problems[k], solution, seeds[k], method).seconds;
          });
          BenchRow row;
          row.d_z = d_z;
          row.method = std::string(to_string(method));
          row.eps_tol = eps;
          row.trial = trial;
          for (const auto& t : timings) {
            row.forward_seconds += t.forward;
            row.backward_seconds += t.backward;
            row.iterations += t.iterations;
            row.converged += t.converged ? 1 : 0;
          }
          report.rows.push_back(std::move(row));
        }
      }
    }
  }
  return report;
}

}  // namespace admm_layer::cli
