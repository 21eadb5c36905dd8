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

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "admm_layer/cli/cli.hpp"

namespace admm_layer::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

template <typename T>
T parse_cell(const std::string& cell) {
  std::istringstream in(cell);
  T value{};
  in >> value;
  if (in.fail() || !in.eof()) throw Error(ErrorCode::kParseError, "bad CSV cell '" + cell + "'");
  return value;
}

void expect_header(std::istream& in, const char* header) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (line != header) throw Error(ErrorCode::kParseError, "unexpected CSV header '" + line + "'");
    return;
  }
  throw Error(ErrorCode::kParseError, "missing CSV header");
}

}  // namespace

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "# jobs=" << report.jobs << '\n' << kBenchHeader << '\n' << std::setprecision(17);
  for (const auto& r : report.rows) {
    out << r.d_z << ',' << r.method << ',' << r.eps_tol << ',' << r.trial << ','
        << r.forward_seconds << ',' << r.backward_seconds << ',' << r.iterations << ','
        << r.converged << '\n';
  }
}

BenchReport read_bench_csv(std::istream& in) {
  BenchReport report;
  std::string line;
  const auto start = in.tellg();
  if (std::getline(in, line) && line.rfind("# jobs=", 0) == 0) {
    report.jobs = parse_cell<int>(line.substr(7));
  } else {
    in.clear();
    in.seekg(start);
  }
  expect_header(in, kBenchHeader);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 8) throw Error(ErrorCode::kParseError, "bench row needs 8 columns");
    BenchRow r;
    r.d_z = parse_cell<Index>(c[0]);
    r.method = c[1];
    r.eps_tol = parse_cell<double>(c[2]);
    r.trial = parse_cell<int>(c[3]);
    r.forward_seconds = parse_cell<double>(c[4]);
    r.backward_seconds = parse_cell<double>(c[5]);
    r.iterations = parse_cell<long>(c[6]);
    r.converged = parse_cell<int>(c[7]);
    report.rows.push_back(std::move(r));
  }
  return report;
}

void write_train_csv(std::ostream& out, const std::vector<TrainRow>& rows) {
  out << kTrainHeader << '\n' << std::setprecision(17);
  for (const auto& r : rows)
    out << r.epoch << ',' << r.mean_loss << ',' << r.fwd_seconds << ',' << r.bwd_seconds << '\n';
}

std::vector<TrainRow> read_train_csv(std::istream& in) {
  expect_header(in, kTrainHeader);
  std::vector<TrainRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 4) throw Error(ErrorCode::kParseError, "train row needs 4 columns");
    rows.push_back({parse_cell<int>(c[0]), parse_cell<double>(c[1]), parse_cell<double>(c[2]),
                    parse_cell<double>(c[3])});
  }
  return rows;
}

}  // namespace admm_layer::cli
