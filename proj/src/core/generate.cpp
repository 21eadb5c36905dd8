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

#include "admm_layer/core/generate.hpp"

#include "admm_layer/core/random.hpp"

namespace admm_layer {

QPProblem generate_exp1_problem(Index num_vars, std::uint64_t seed) {
  if (num_vars < 1) throw Error(ErrorCode::kInvalidArgument, "d_z must be >= 1");
  Rng u_stream(seed, 0);
  Rng p_stream(seed, 1);
  Rng l_stream(seed, 2);
  Rng ub_stream(seed, 3);

  const Matrix U = u_stream.normal_matrix(2 * num_vars, num_vars);
  Matrix Q = (U.transpose() * U) / (2.0 * static_cast<double>(num_vars));
  Vector p = p_stream.normal_vector(num_vars);
  Vector l = l_stream.uniform_vector(num_vars, -2.0, -1.0);
  Vector u = ub_stream.uniform_vector(num_vars, 1.0, 2.0);
  Matrix A = Matrix::Ones(1, num_vars);
  Vector b = Vector::Ones(1);
  return validate_problem(std::move(Q), std::move(p), std::move(A), std::move(b), std::move(l),
                          std::move(u));
}

}  // namespace admm_layer
