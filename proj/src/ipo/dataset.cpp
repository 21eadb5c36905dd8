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

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "admm_layer/core/random.hpp"
#include "admm_layer/core/serialize.hpp"
#include "admm_layer/ipo/ipo.hpp"

namespace admm_layer::ipo {

namespace {

double pooled_variance(const Matrix& m) {
  const double n = static_cast<double>(m.size());
  const double mean = m.sum() / n;
  return (m.array() - mean).square().sum() / (n - 1.0);
}

void check_sizes(Index d_z, Index d_w, Index m, double snr) {
  if (d_z < 1 || d_w < 1 || m < 1)
    throw Error(ErrorCode::kInvalidArgument, "d_z, d_w and m must be >= 1");
  if (!(snr > 0.0 && snr <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "snr must be in (0, 1]");
}

}  // namespace

LinearModel LinearModel::random_init(Index d_w, Index d_z, std::uint64_t seed, double variance) {
  Rng rng(seed, 5);
  return LinearModel{std::sqrt(variance) * rng.normal_matrix(d_w, d_z)};
}

const Matrix& IPODataset::q_true(Index i) const {
  return Q_true.size() == 1 ? Q_true.front() : Q_true.at(static_cast<std::size_t>(i));
}

const Matrix& IPODataset::w_cov(Index i) const {
  return W_cov.size() == 1 ? W_cov.front() : W_cov.at(static_cast<std::size_t>(i));
}

void IPODataset::validate() const {
  const Index m = size();
  const Index d_z = num_vars();
  const Index d_w = num_features();
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kDimensionMismatch, what); };
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "dataset has no instances");
  if (P.rows() != m) fail("W and P row counts differ");
  if (Q_true.size() != 1 && static_cast<Index>(Q_true.size()) != m) fail("Q_true count");
  for (const auto& q : Q_true)
    if (q.rows() != d_z || q.cols() != d_z) fail("Q_true shape");
  if (!W_cov.empty() && W_cov.size() != 1 && static_cast<Index>(W_cov.size()) != m)
    fail("W_cov count");
  for (const auto& c : W_cov)
    if (c.rows() != d_w || c.cols() != d_w) fail("W_cov shape");
  if (F_diag.size() != 0 && F_diag.size() != d_z) fail("F_diag size");
  if (l.size() != d_z || u.size() != d_z) fail("bound size");
  if (theta0.size() != 0 && (theta0.rows() != d_w || theta0.cols() != d_z)) fail("theta0 shape");
}

Matrix toeplitz_correlation(Index n, double decay) {
  Matrix q(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) q(j, k) = std::pow(decay, static_cast<double>(std::abs(j - k)));
  return q;
}

IPODataset generate_exp2_dataset(Index d_z, Index d_w, Index m, double snr, std::uint64_t seed) {
  check_sizes(d_z, d_w, m, snr);
  IPODataset data;
  data.snr = snr;
  data.theta0 = Rng(seed, 0).normal_matrix(d_w, d_z);
  data.W = Rng(seed, 1).normal_matrix(m, d_w);

  const Matrix q = toeplitz_correlation(d_z, 0.5);
  const Matrix chol = q.llt().matrixL();
  const Matrix eps = Rng(seed, 2).normal_matrix(m, d_z) * chol.transpose();

  const Matrix signal = data.W * data.theta0;
  const double var_signal = m * d_z > 1 ? pooled_variance(signal) : 1.0;
  const double var_eps = m * d_z > 1 ? pooled_variance(eps) : 1.0;
  data.tau = std::sqrt(var_signal / snr) / std::sqrt(var_eps);
  data.P = signal + data.tau * eps;

  const double scale = m * d_z > 1 ? 1.0 / std::sqrt(pooled_variance(data.P)) : 1.0;
  data.P *= scale;
  data.theta0 *= scale;
  data.tau *= scale;

  data.Q_true = {q};
  data.l = Rng(seed, 3).uniform_vector(d_z, -1.0, 0.0);
  data.u = Rng(seed, 4).uniform_vector(d_z, 0.0, 1.0);
  return data;
}

IPODataset generate_factor_dataset(Index d_z, Index d_w, Index m, double snr, std::uint64_t seed) {
  IPODataset data = generate_exp2_dataset(d_z, d_w, m, snr, seed);
  const Matrix q = data.Q_true.front();
  data.Q_true = {data.theta0.transpose() * data.theta0 + data.tau * data.tau * q};
  data.W_cov = {Matrix::Identity(d_w, d_w)};
  data.l = Vector::Zero(d_z);
  data.u = Vector::Ones(d_z);
  if (m > d_w) {
    const Matrix residual = data.P - data.W * ols_fit(data).theta;
    data.F_diag = residual.colwise().squaredNorm().transpose() / static_cast<double>(m - d_w);
  } else {
    data.F_diag = data.tau * data.tau * q.diagonal();
  }
  return data;
}

LinearModel ols_fit(const IPODataset& dataset) {
  const Index m = dataset.size();
  const Index d_w = dataset.num_features();
  if (m <= d_w)
    throw Error(ErrorCode::kRankDeficientFeatures, "need more instances than features");
  Eigen::ColPivHouseholderQR<Matrix> qr(dataset.W);
  qr.setThreshold(1e-10);
  if (qr.rank() < d_w) throw Error(ErrorCode::kRankDeficientFeatures, "feature matrix is rank deficient");
  return LinearModel{qr.solve(dataset.P)};
}

// Dataset file layout: {"m", "d_w", "d_z", "W", "P", "Q_true": [flat...],
// "W_cov": [flat...], "F_diag", "l", "u", "theta0", "tau", "snr"}.
void save_dataset(const std::filesystem::path& path, const IPODataset& dataset) {
  dataset.validate();
  nlohmann::json j;
  j["m"] = dataset.size();
  j["d_w"] = dataset.num_features();
  j["d_z"] = dataset.num_vars();
  j["W"] = encode_matrix(dataset.W);
  j["P"] = encode_matrix(dataset.P);
  j["Q_true"] = nlohmann::json::array();
  for (const auto& q : dataset.Q_true) j["Q_true"].push_back(encode_matrix(q));
  j["W_cov"] = nlohmann::json::array();
  for (const auto& c : dataset.W_cov) j["W_cov"].push_back(encode_matrix(c));
  j["F_diag"] = encode_vector(dataset.F_diag);
  j["l"] = encode_vector(dataset.l);
  j["u"] = encode_vector(dataset.u);
  j["theta0"] = encode_matrix(dataset.theta0);
  j["tau"] = dataset.tau;
  j["snr"] = dataset.snr;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  out << std::setw(1) << j << '\n';
}

IPODataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    IPODataset data;
    const Index m = j.at("m").get<Index>();
    const Index d_w = j.at("d_w").get<Index>();
    const Index d_z = j.at("d_z").get<Index>();
    data.W = decode_matrix(j.at("W"), m, d_w);
    data.P = decode_matrix(j.at("P"), m, d_z);
    for (const auto& q : j.at("Q_true")) data.Q_true.push_back(decode_matrix(q, d_z, d_z));
    for (const auto& c : j.at("W_cov")) data.W_cov.push_back(decode_matrix(c, d_w, d_w));
    const auto& f = j.at("F_diag");
    data.F_diag = decode_vector(f, static_cast<Index>(f.size()));
    data.l = decode_vector(j.at("l"), d_z);
    data.u = decode_vector(j.at("u"), d_z);
    const auto& t = j.at("theta0");
    data.theta0 = t.empty() ? Matrix() : decode_matrix(t, d_w, d_z);
    data.tau = j.at("tau").get<double>();
    data.snr = j.at("snr").get<double>();
    data.validate();
    return data;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

void write_dataset_csv(std::ostream& out, const IPODataset& dataset) {
  const Index d_w = dataset.num_features();
  const Index d_z = dataset.num_vars();
  for (Index k = 0; k < d_w; ++k) out << (k ? "," : "") << "w_" << k;
  for (Index k = 0; k < d_z; ++k) out << ",p_" << k;
  out << '\n' << std::setprecision(17);
  for (Index i = 0; i < dataset.size(); ++i) {
    for (Index k = 0; k < d_w; ++k) out << (k ? "," : "") << dataset.W(i, k);
    for (Index k = 0; k < d_z; ++k) out << ',' << dataset.P(i, k);
    out << '\n';
  }
}

void read_dataset_csv(std::istream& in, Index d_w, Index d_z, Matrix& W, Matrix& P) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "empty dataset CSV");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParseError, "bad CSV cell '" + cell + "'");
      }
    }
    if (static_cast<Index>(row.size()) != d_w + d_z)
      throw Error(ErrorCode::kParseError, "CSV row has the wrong number of columns");
    rows.push_back(std::move(row));
  }
  const Index m = static_cast<Index>(rows.size());
  W.resize(m, d_w);
  P.resize(m, d_z);
  for (Index i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (Index k = 0; k < d_w; ++k) W(i, k) = r[static_cast<std::size_t>(k)];
    for (Index k = 0; k < d_z; ++k) P(i, k) = r[static_cast<std::size_t>(d_w + k)];
  }
}

}  // namespace admm_layer::ipo
