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

#include <cmath>

#include <Eigen/LU>

#include "admm_layer/diff/diff.hpp"

namespace admm_layer::detail {

// PartialPivLU's rcond estimate is unreliable on exactly singular input (a
// zero pivot can come back as rcond 1), so the pivots are checked as well.
inline bool lu_is_singular(const Eigen::PartialPivLU<Matrix>& lu) {
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (pivots.size() == 0) return false;
  if (!pivots.allFinite()) return true;
  if (pivots.minCoeff() <= kSingularRcond * pivots.maxCoeff()) return true;
  const double rcond = lu.rcond();
  return !(rcond > kSingularRcond) || !std::isfinite(rcond);
}

}  // namespace admm_layer::detail
