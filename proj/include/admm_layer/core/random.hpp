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
#include <random>

#include "admm_layer/core/problem.hpp"

namespace admm_layer {

/// Seedable, portable 64-bit random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Each (seed, stream) pair is mixed through SplitMix64 into an
/// independent engine seed, so a generator can hand out one stream per field
/// without the fields sharing state. Uniforms take the top 53 bits of a draw;
/// normals use the Box-Muller transform (distribution objects from <random>
/// are implementation-defined and are not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Entries drawn row by row.
  Matrix normal_matrix(Index rows, Index cols);
  Vector normal_vector(Index n);
  Vector uniform_vector(Index n, double lo, double hi);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace admm_layer
