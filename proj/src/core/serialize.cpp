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

#include "admm_layer/core/serialize.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace admm_layer {

namespace {

nlohmann::json encode_scalar(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  return x;
}

double decode_scalar(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw Error(ErrorCode::kParseError, "expected a number, \"inf\" or \"-inf\", got " + j.dump());
}

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw Error(ErrorCode::kParseError, std::string("missing field '") + name + "'");
  return *it;
}

}  // namespace

nlohmann::json encode_vector(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(encode_scalar(v[i]));
  return out;
}

Vector decode_vector(const nlohmann::json& j, Index expected_size) {
  if (!j.is_array() || static_cast<Index>(j.size()) != expected_size) {
    throw Error(ErrorCode::kParseError,
                "expected an array of length " + std::to_string(expected_size));
  }
  Vector v(expected_size);
  for (Index i = 0; i < expected_size; ++i) v[i] = decode_scalar(j[static_cast<std::size_t>(i)]);
  return v;
}

nlohmann::json encode_matrix(const Matrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) out.push_back(encode_scalar(m(r, c)));
  return out;
}

Matrix decode_matrix(const nlohmann::json& j, Index rows, Index cols) {
  const Vector flat = decode_vector(j, rows * cols);
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  return m;
}

nlohmann::json problem_to_json(const QPProblem& problem) {
  nlohmann::json j;
  j["d_z"] = problem.num_vars();
  j["d_eq"] = problem.num_eq();
  j["Q"] = encode_matrix(problem.Q());
  j["p"] = encode_vector(problem.p());
  j["A"] = encode_matrix(problem.A());
  j["b"] = encode_vector(problem.b());
  j["l"] = encode_vector(problem.l());
  j["u"] = encode_vector(problem.u());
  return j;
}

QPProblem problem_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "problem must be a JSON object");
  const auto& dz = field(j, "d_z");
  const auto& deq = field(j, "d_eq");
  if (!dz.is_number_integer() || !deq.is_number_integer() || dz.get<long long>() < 1 ||
      deq.get<long long>() < 0) {
    throw Error(ErrorCode::kParseError, "d_z must be a positive integer and d_eq non-negative");
  }
  const Index n = dz.get<Index>();
  const Index m = deq.get<Index>();
  QPData data;
  data.Q = decode_matrix(field(j, "Q"), n, n);
  data.p = decode_vector(field(j, "p"), n);
  data.A = decode_matrix(field(j, "A"), m, n);
  data.b = decode_vector(field(j, "b"), m);
  data.l = decode_vector(field(j, "l"), n);
  data.u = decode_vector(field(j, "u"), n);
  return validate_problem(std::move(data));
}

void write_problem(std::ostream& out, const QPProblem& problem) {
  out << problem_to_json(problem).dump(2) << '\n';
}

QPProblem read_problem(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return problem_from_json(j);
}

void save_problem(const std::filesystem::path& path, const QPProblem& problem) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  write_problem(out, problem);
}

QPProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  return read_problem(in);
}

}  // namespace admm_layer
