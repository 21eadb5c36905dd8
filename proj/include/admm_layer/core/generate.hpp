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

#include "admm_layer/core/problem.hpp"

namespace admm_layer {

/// Random benchmark instance: Q = U'U / (2 d_z) with U a (2 d_z x d_z)
/// standard normal matrix, p standard normal, l ~ U[-2,-1] and u ~ U[1,2]
/// per coordinate, and the budget constraint 1'z = 1.
///
/// Streams: 0 -> U, 1 -> p, 2 -> l, 3 -> u.
QPProblem generate_exp1_problem(Index num_vars, std::uint64_t seed);

}  // namespace admm_layer
