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

#include <string>

#include "admm_layer/diff/diff.hpp"

namespace admm_layer {

std::string_view to_string(BackwardMethod method) {
  switch (method) {
    case BackwardMethod::kFixedPoint: return "fp";
    case BackwardMethod::kKKTImplicit: return "kkt";
    case BackwardMethod::kUnrolled: return "unroll";
  }
  return "unknown";
}

BackwardMethod parse_backward_method(std::string_view name) {
  if (name == "fp") return BackwardMethod::kFixedPoint;
  if (name == "kkt") return BackwardMethod::kKKTImplicit;
  if (name == "unroll") return BackwardMethod::kUnrolled;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown backward method '" + std::string(name) + "' (expected fp, kkt or unroll)");
}

Vector projection_mask(const Vector& v, const Vector& l, const Vector& u,
                       double boundary_perturbation) {
  if (l.size() != v.size() || u.size() != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "projection_mask: size mismatch");
  }
  Vector mask(v.size());
  for (Index j = 0; j < v.size(); ++j) {
    const bool inside = v[j] >= l[j] + boundary_perturbation && v[j] <= u[j] - boundary_perturbation;
    mask[j] = inside ? 1.0 : 0.0;
  }
  return mask;
}

}  // namespace admm_layer
