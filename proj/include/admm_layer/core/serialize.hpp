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

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "admm_layer/core/problem.hpp"

namespace admm_layer {

// Text format for a problem instance:
//
//   {"d_z": 2, "d_eq": 1,
//    "Q": [row-major d_z*d_z], "p": [...], "A": [row-major d_eq*d_z],
//    "b": [...], "l": [...], "u": [...]}
//
// Infinite entries are written as the strings "inf" and "-inf".

nlohmann::json encode_vector(const Vector& v);
Vector decode_vector(const nlohmann::json& j, Index expected_size);
nlohmann::json encode_matrix(const Matrix& m);  // row-major, flat
Matrix decode_matrix(const nlohmann::json& j, Index rows, Index cols);

nlohmann::json problem_to_json(const QPProblem& problem);
QPProblem problem_from_json(const nlohmann::json& j);

void write_problem(std::ostream& out, const QPProblem& problem);
QPProblem read_problem(std::istream& in);

void save_problem(const std::filesystem::path& path, const QPProblem& problem);
QPProblem load_problem(const std::filesystem::path& path);

}  // namespace admm_layer
