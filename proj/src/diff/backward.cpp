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

#include "admm_layer/diff/diff.hpp"

namespace admm_layer {

TimedGradient backward(const QPProblem& problem, const QPSolution& solution, const Vector& grad_z,
                       BackwardMethod method, const BackwardOptions& options) {
  using Clock = std::chrono::steady_clock;
  TimedGradient out;
  const auto start = Clock::now();
  switch (method) {
    case BackwardMethod::kFixedPoint:
      out.gradient = backward_fixed_point(problem, solution, grad_z, options);
      break;
    case BackwardMethod::kKKTImplicit:
      out.gradient = backward_kkt(problem, solution, grad_z);
      break;
    case BackwardMethod::kUnrolled:
      out.gradient = backward_unrolled(problem, solution, grad_z);
      break;
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace admm_layer
