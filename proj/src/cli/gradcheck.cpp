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

#include "admm_layer/admm/admm.hpp"
#include "admm_layer/cli/cli.hpp"
#include "admm_layer/core/generate.hpp"
#include "admm_layer/core/random.hpp"

namespace admm_layer::cli {

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
  if (options.d_z < 1 || options.trials < 1)
    throw Error(ErrorCode::kInvalidArgument, "dz and trials must be positive");
  if (!(options.tol >= 0.0) || !(options.forward_eps > 0.0) || !(options.fd_step > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "tolerances must be positive");

  SolverConfig solver = SolverConfig::with_tolerance(options.forward_eps, options.rho);
  solver.record_trace = options.method == BackwardMethod::kUnrolled;

  GradcheckReport report;
  const int max_draws = 10 * options.trials;
  for (int draw = 0; draw < max_draws && report.checked < options.trials; ++draw) {
    const std::uint64_t s = bench_instance_seed(options.seed, options.d_z, 0, draw);
    const QPProblem problem = generate_exp1_problem(options.d_z, s);
    const QPSolution solution = admm_solve(problem, solver);
    if (!solution.converged || !oracle::strictly_complementary(problem, solution)) {
      ++report.skipped;
      continue;
    }
    const Vector g = Rng(s, 9).normal_vector(options.d_z);
    const GradientBundle engine = backward(problem, solution, g, options.method).gradient;
    const GradientBundle fd =
        oracle::fd_bundle(problem, [&](const Vector& z) { return g.dot(z); }, options.fd_step);
    report.errors.merge(oracle::compare_bundles_normwise(engine, fd));
    report.entrywise.merge(oracle::compare_bundles(engine, fd));
    ++report.checked;
  }
  report.passed = report.checked == options.trials && report.errors.max() <= options.tol;
  return report;
}

}  // namespace admm_layer::cli
