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

#include <doctest.h>

#include <atomic>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "admm_layer/core/generate.hpp"
#include "admm_layer/core/parallel.hpp"
#include "admm_layer/core/problem.hpp"
#include "admm_layer/core/random.hpp"
#include "admm_layer/core/serialize.hpp"

using namespace admm_layer;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an admm_layer::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("validate_problem accepts a well-posed instance") {
  Matrix Q(2, 2);
  Q << 2, 0, 0, 2;
  const QPProblem prob = validate_problem(Q, vec({-1, -1}), Matrix::Ones(1, 2), vec({1}),
                                          vec({0, 0}), vec({1, 1}));
  CHECK(prob.num_vars() == 2);
  CHECK(prob.num_eq() == 1);
  CHECK(prob.objective(vec({0.5, 0.5})) == doctest::Approx(-0.5));
}

TEST_CASE("validate_problem rejects bad input") {
  SUBCASE("inverted bounds") {
    CHECK(code_of([] {
            validate_problem(Matrix::Identity(1, 1), vec({0}), Matrix(0, 1), Vector(0), vec({0.5}),
                             vec({0.2}));
          }) == ErrorCode::kBoundsInverted);
  }
  SUBCASE("asymmetric Q") {
    Matrix Q(2, 2);
    Q << 1, 0.3, 0.1, 1;
    CHECK(code_of([&] {
            validate_problem(Q, vec({0, 0}), Matrix(0, 2), Vector(0), vec({0, 0}), vec({1, 1}));
          }) == ErrorCode::kAsymmetricQ);
  }
  SUBCASE("dimension mismatch") {
    CHECK(code_of([] {
            validate_problem(Matrix::Identity(2, 2), vec({0, 0}), Matrix::Ones(1, 3), vec({1}),
                             vec({0, 0}), vec({1, 1}));
          }) == ErrorCode::kDimensionMismatch);
    CHECK(code_of([] {
            validate_problem(Matrix::Identity(2, 2), vec({0}), Matrix(0, 2), Vector(0),
                             vec({0, 0}), vec({1, 1}));
          }) == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("non-finite data") {
    CHECK(code_of([] {
            validate_problem(Matrix::Identity(1, 1), vec({kInf}), Matrix(0, 1), Vector(0),
                             vec({0}), vec({1}));
          }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] {
            validate_problem(Matrix::Identity(1, 1), vec({0}), Matrix(0, 1), Vector(0), vec({kInf}),
                             vec({kInf}));
          }) == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("tiny asymmetry is symmetrized and validation is idempotent") {
  Matrix Q(2, 2);
  Q << 1, 0.5, 0.5 + 1e-14, 1;
  const QPProblem a = validate_problem(Q, vec({0, 0}), Matrix(0, 2), Vector(0),
                                       vec({-kInf, 0}), vec({kInf, 1}));
  CHECK(a.Q() == a.Q().transpose());
  const QPProblem b = validate_problem(a.data());
  CHECK(b.Q() == a.Q());
  CHECK(b.p() == a.p());
  CHECK(b.l() == a.l());
  CHECK(b.u() == a.u());
}

TEST_CASE("SolverConfig validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.rho = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SolverConfig::with_tolerance(1e-3, 0.1);
  CHECK(c.eps_primal == 1e-3);
  CHECK(c.eps_dual == 1e-3);
  CHECK(c.rho == 0.1);
  c.max_iter = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("Rng is deterministic and streams differ") {
  Rng a(7, 0), b(7, 0), c(7, 1);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs |= x != c.uniform();
  }
  CHECK(differs);
  for (int i = 0; i < 100; ++i) CHECK(a.below(5) < 5);
}

TEST_CASE("Rng normals have unit moments") {
  Rng rng(3);
  const Vector v = rng.normal_vector(200000);
  const double mean = v.mean();
  const double var = (v.array() - mean).square().mean();
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("generate_exp1_problem") {
  const QPProblem a = generate_exp1_problem(10, 123);
  const QPProblem b = generate_exp1_problem(10, 123);
  CHECK(a.Q() == b.Q());
  CHECK(a.p() == b.p());
  CHECK(a.l() == b.l());
  CHECK(a.u() == b.u());
  CHECK(a.A() == Matrix::Ones(1, 10));
  CHECK(a.b() == vec({1}));
  for (Index j = 0; j < 10; ++j) {
    CHECK(a.l()[j] >= -2.0);
    CHECK(a.l()[j] <= -1.0);
    CHECK(a.u()[j] >= 1.0);
    CHECK(a.u()[j] <= 2.0);
    CHECK(a.u()[j] - a.l()[j] >= 2.0);
    CHECK(a.u()[j] - a.l()[j] <= 4.0);
  }
  const QPProblem c = generate_exp1_problem(10, 124);
  CHECK(c.p() != a.p());

  const QPProblem big = generate_exp1_problem(50, 5);
  CHECK(big.Q().llt().info() == Eigen::Success);
  CHECK_THROWS_AS(generate_exp1_problem(0, 1), Error);
}

TEST_CASE("problem JSON round trip keeps infinities") {
  Matrix Q(2, 2);
  Q << 2, 0.25, 0.25, 1;
  const QPProblem prob = validate_problem(Q, vec({0.1, -0.3}), Matrix::Ones(1, 2), vec({1}),
                                          vec({-kInf, 0}), vec({1, kInf}));
  std::stringstream ss;
  write_problem(ss, prob);
  CHECK(ss.str().find("\"-inf\"") != std::string::npos);
  const QPProblem back = read_problem(ss);
  CHECK(back.Q() == prob.Q());
  CHECK(back.p() == prob.p());
  CHECK(back.A() == prob.A());
  CHECK(back.b() == prob.b());
  CHECK(back.l() == prob.l());
  CHECK(back.u() == prob.u());

  const QPProblem gen = generate_exp1_problem(6, 99);
  std::stringstream ss2;
  write_problem(ss2, gen);
  const QPProblem gen_back = read_problem(ss2);
  CHECK(gen_back.Q() == gen.Q());
  CHECK(gen_back.l() == gen.l());
}

TEST_CASE("problem JSON rejects malformed input") {
  std::stringstream bad("{\"d_z\": 1}");
  CHECK(code_of([&] { read_problem(bad); }) == ErrorCode::kParseError);
  std::stringstream garbage("not json");
  CHECK(code_of([&] { read_problem(garbage); }) == ErrorCode::kParseError);
  std::stringstream wrong_len(
      R"({"d_z":1,"d_eq":0,"Q":[1,2],"p":[0],"A":[],"b":[],"l":[0],"u":[1]})");
  CHECK(code_of([&] { read_problem(wrong_len); }) == ErrorCode::kParseError);
}

TEST_CASE("parallel_for visits every index once") {
  for (int jobs : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(37);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 2,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("GradientBundle arithmetic") {
  GradientBundle g = GradientBundle::zeros(3, 1);
  g.dp = vec({1, 2, 3});
  g.dQ(0, 1) = g.dQ(1, 0) = 0.5;
  GradientBundle h = g;
  h += g;
  h *= 0.25;
  CHECK(h.dp == 0.5 * g.dp);
  CHECK(h.dQ(1, 0) == 0.25);
  CHECK(h.db.size() == 1);
}
