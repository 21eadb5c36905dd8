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

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "admm_layer/oracle/oracle.hpp"

namespace admm_layer::oracle {

namespace {

// sign * z[var] >= rhs. Lower bounds have sign +1 and rhs l_j, upper bounds
// sign -1 and rhs -u_j.
struct Constraint {
  Index var;
  double sign;
  double rhs;
};

constexpr double kFeasibilityTolerance = 1e-12;
constexpr double kStepTolerance = 1e-12;

class ActiveSetSolver {
 public:
  explicit ActiveSetSolver(const QPProblem& problem)
      : problem_(problem), n_(problem.num_vars()), m_(problem.num_eq()) {
    for (Index j = 0; j < n_; ++j) {
      if (std::isfinite(problem.l()[j])) constraints_.push_back({j, 1.0, problem.l()[j]});
    }
    for (Index j = 0; j < n_; ++j) {
      if (std::isfinite(problem.u()[j])) constraints_.push_back({j, -1.0, -problem.u()[j]});
    }
    is_active_.assign(constraints_.size(), false);
  }

  QPSolution run(double rho) {
    const Eigen::LLT<Matrix> q_llt(problem_.Q());
    if (q_llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kSingularKKT, "reference solver needs Q positive definite");
    }

    Vector w;
    solve(-problem_.p(), equality_rhs(), z_, w);

    const int shift = static_cast<int>(std::min<Index>(n_, 20));
    const long long cap = static_cast<long long>(n_) * (1LL << shift);
    long long steps = 0;

    for (;;) {
      const int q = most_violated();
      if (q < 0) break;
      const Constraint& cq = constraints_[static_cast<std::size_t>(q)];
      Vector normal = Vector::Zero(n_);
      normal[cq.var] = cq.sign;
      double y_q = 0.0;

      for (;;) {
        if (++steps > cap) {
          throw Error(ErrorCode::kCyclingDetected, "active-set loop exceeded its step cap");
        }
        Vector d;
        solve(normal, Vector::Zero(m_ + static_cast<Index>(active_.size())), d, w);

        // Largest step keeping the active multipliers non-negative.
        double t_dual = kInf;
        std::size_t blocking = 0;
        for (std::size_t i = 0; i < active_.size(); ++i) {
          const double wi = w[m_ + static_cast<Index>(i)];
          if (wi > kStepTolerance) {
            const double ratio = multipliers_[i] / wi;
            if (ratio < t_dual) {
              t_dual = ratio;
              blocking = i;
            }
          }
        }
        // Step that makes constraint q exactly active.
        const double curvature = cq.sign * d[cq.var];
        const double t_primal = curvature > kStepTolerance ? -slack(cq) / curvature : kInf;

        if (t_dual == kInf && t_primal == kInf) {
          throw Error(ErrorCode::kInvalidArgument, "constraints are infeasible");
        }
        const double t = std::min(t_dual, t_primal);
        z_ += t * d;
        for (std::size_t i = 0; i < active_.size(); ++i) {
          multipliers_[i] -= t * w[m_ + static_cast<Index>(i)];
        }
        y_q += t;

        if (t_primal <= t_dual) {
          active_.push_back(q);
          multipliers_.push_back(y_q);
          is_active_[static_cast<std::size_t>(q)] = true;
          break;
        }
        is_active_[static_cast<std::size_t>(active_[blocking])] = false;
        active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(blocking));
        multipliers_.erase(multipliers_.begin() + static_cast<std::ptrdiff_t>(blocking));
      }
    }

    return polish(rho, steps);
  }

 private:
  Vector equality_rhs() const {
    Vector rhs(m_ + static_cast<Index>(active_.size()));
    rhs.head(m_) = problem_.b();
    for (std::size_t i = 0; i < active_.size(); ++i) {
      rhs[m_ + static_cast<Index>(i)] = constraints_[static_cast<std::size_t>(active_[i])].rhs;
    }
    return rhs;
  }

  double slack(const Constraint& c) const { return c.sign * z_[c.var] - c.rhs; }

  int most_violated() const {
    int worst = -1;
    double worst_slack = 0.0;
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
      if (is_active_[i]) continue;
      const double s = slack(constraints_[i]);
      if (s < -kFeasibilityTolerance * (1.0 + std::abs(constraints_[i].rhs)) && s < worst_slack) {
        worst_slack = s;
        worst = static_cast<int>(i);
      }
    }
    return worst;
  }

  // [Q  C'] [d]   [top   ]
  // [C  0 ] [w] = [bottom],   C = [A; rows of the active constraints]
  void solve(const Vector& top, const Vector& bottom, Vector& d, Vector& w) const {
    const Index a = static_cast<Index>(active_.size());
    const Index size = n_ + m_ + a;
    Matrix K = Matrix::Zero(size, size);
    K.topLeftCorner(n_, n_) = problem_.Q();
    K.block(0, n_, n_, m_) = problem_.A().transpose();
    K.block(n_, 0, m_, n_) = problem_.A();
    for (Index i = 0; i < a; ++i) {
      const Constraint& c = constraints_[static_cast<std::size_t>(active_[static_cast<std::size_t>(i)])];
      K(c.var, n_ + m_ + i) = c.sign;
      K(n_ + m_ + i, c.var) = c.sign;
    }
    Vector rhs(size);
    rhs << top, bottom;
    const Eigen::PartialPivLU<Matrix> lu(K);
    if (!(lu.rcond() > 1e-14)) {
      throw Error(ErrorCode::kSingularKKT, "reference KKT system is singular (A rank deficient?)");
    }
    const Vector sol = lu.solve(rhs);
    d = sol.head(n_);
    w = sol.tail(m_ + a);
  }

  QPSolution polish(double rho, long long steps) {
    Vector w;
    solve(-problem_.p(), equality_rhs(), z_, w);
    Vector mu = Vector::Zero(n_);
    for (std::size_t i = 0; i < active_.size(); ++i) {
      const Constraint& c = constraints_[static_cast<std::size_t>(active_[i])];
      z_[c.var] = c.sign * c.rhs;
      mu[c.var] += c.sign * w[m_ + static_cast<Index>(i)] / rho;
    }

    QPSolution sol;
    sol.rho = rho;
    sol.z_star = z_;
    sol.x_star = z_;
    sol.eta_star = w.head(m_);
    sol.mu_star = mu;
    sol.v_star = z_ + mu;
    sol.iterations = static_cast<int>(std::min<long long>(steps, 1LL << 30));
    sol.converged = true;
    return sol;
  }

  const QPProblem& problem_;
  Index n_;
  Index m_;
  std::vector<Constraint> constraints_;
  std::vector<bool> is_active_;
  std::vector<int> active_;
  std::vector<double> multipliers_;
  Vector z_;
};

}  // namespace

QPSolution reference_solve(const QPProblem& problem, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rho must be positive");
  ActiveSetSolver solver(problem);
  return solver.run(rho);
}

}  // namespace admm_layer::oracle
