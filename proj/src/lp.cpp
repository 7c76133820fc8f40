// Copyright 2026 The genwass Authors
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

#include "genwass/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace genwass::lp {
namespace {

constexpr Eigen::Index kNone = -1;

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
      : m_(A.rows()), n_(A.cols()), t_(A.rows() + 1, A.cols() + A.rows() + 1),
        basis_(static_cast<size_t>(A.rows())),
        live_(static_cast<size_t>(A.rows()), true) {
    t_.setZero();
    t_.topLeftCorner(m_, n_) = A;
    t_.block(0, n_, m_, m_).setIdentity();
    t_.col(rhs()).head(m_) = b;
    for (Eigen::Index i = 0; i < m_; ++i) basis_[static_cast<size_t>(i)] = n_ + i;
  }

  Eigen::Index rhs() const { return n_ + m_; }
  Eigen::Index obj() const { return m_; }

  // Reduced-cost row for cost vector `cost` over the structural columns
  // (artificial columns carry `artificial_cost`).
  void set_objective(const Eigen::VectorXd& cost, double artificial_cost) {
    Eigen::VectorXd full(n_ + m_);
    full.head(n_) = cost;
    full.tail(m_).setConstant(artificial_cost);
    t_.row(obj()).setZero();
    t_.row(obj()).head(n_ + m_) = full.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!live_[static_cast<size_t>(i)]) continue;
      const double cb = full(basis_[static_cast<size_t>(i)]);
      if (cb != 0.0) t_.row(obj()) -= cb * t_.row(i);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index j) {
    t_.row(r) /= t_(r, j);
    const Eigen::RowVectorXd prow = t_.row(r);
    Eigen::VectorXd col = t_.col(j);
    col(r) = 0.0;
    t_.noalias() -= col * prow;
    t_(r, j) = 1.0;
    basis_[static_cast<size_t>(r)] = j;
  }

  // Runs primal simplex iterations on the current objective row. Columns
  // >= `entering_limit` never enter. Returns kOptimal, kUnbounded or
  // kIterationLimit.
  Status iterate(Eigen::Index entering_limit, const Options& opt,
                 int* iterations) {
    int degenerate_run = 0;
    while (*iterations < opt.max_iterations) {
      const bool bland = degenerate_run > 50;
      Eigen::Index enter = kNone;
      double best = -opt.optimality_tol;
      for (Eigen::Index j = 0; j < entering_limit; ++j) {
        const double d = t_(obj(), j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter == kNone) return Status::kOptimal;

      Eigen::Index leave = kNone;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!live_[static_cast<size_t>(i)]) continue;
        const double a = t_(i, enter);
        if (a <= opt.pivot_tol) continue;
        const double r = std::max(t_(i, rhs()), 0.0) / a;
        if (r < ratio - 1e-15 ||
            (r <= ratio + 1e-15 && leave != kNone &&
             basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)])) {
          ratio = std::min(ratio, r);
          leave = i;
        }
      }
      if (leave == kNone) return Status::kUnbounded;
      degenerate_run = (ratio == 0.0) ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      ++*iterations;
    }
    return Status::kIterationLimit;
  }

  // Pivots basic artificial variables out of the basis; rows where that is
  // impossible are linearly dependent and are retired.
  void expel_artificials(const Options& opt) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!live_[static_cast<size_t>(i)] || basis_[static_cast<size_t>(i)] < n_) {
        continue;
      }
      Eigen::Index best = kNone;
      double mag = opt.pivot_tol;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best == kNone) {
        live_[static_cast<size_t>(i)] = false;
      } else {
        pivot(i, best);
      }
    }
  }

  double objective_value() const { return -t_(obj(), rhs()); }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  const std::vector<bool>& live() const { return live_; }

 private:
  Eigen::Index m_, n_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> live_;
};

}  // namespace

Solution solve(const StandardFormLp& lp, const Options& opt) {
  const Eigen::Index m = lp.A.rows();
  const Eigen::Index n = lp.A.cols();
  Solution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  sol.y = Eigen::VectorXd::Zero(m);

  Eigen::MatrixXd A = lp.A;
  Eigen::VectorXd b = lp.b;
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      sign(i) = -1.0;
      A.row(i) *= -1.0;
      b(i) = -b(i);
    }
  }

  Tableau tab(A, b);
  const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());

  // Phase 1: minimize the sum of artificials.
  tab.set_objective(Eigen::VectorXd::Zero(n), 1.0);
  Status st = tab.iterate(n, opt, &sol.iterations);
  if (st == Status::kIterationLimit) {
    sol.status = st;
    return sol;
  }
  if (tab.objective_value() > opt.feasibility_tol * scale) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  tab.expel_artificials(opt);

  // Phase 2.
  tab.set_objective(lp.c, 0.0);
  st = tab.iterate(n, opt, &sol.iterations);
  if (st != Status::kOptimal) {
    sol.status = st;
    return sol;
  }

  // Refactorize the optimal basis on the original data.
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!tab.live()[static_cast<size_t>(i)]) continue;
    rows.push_back(i);
    cols.push_back(tab.basis()[static_cast<size_t>(i)]);
  }
  const Eigen::Index k = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd B(k, k);
  Eigen::VectorXd bb(k), cb(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    bb(r) = b(rows[static_cast<size_t>(r)]);
    cb(r) = lp.c(cols[static_cast<size_t>(r)]);
    for (Eigen::Index s = 0; s < k; ++s) {
      B(r, s) = A(rows[static_cast<size_t>(r)], cols[static_cast<size_t>(s)]);
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  const Eigen::VectorXd xb = lu.solve(bb);
  const Eigen::VectorXd yb = lu.transpose().solve(cb);
  for (Eigen::Index r = 0; r < k; ++r) {
    sol.x(cols[static_cast<size_t>(r)]) = std::max(xb(r), 0.0);
    sol.y(rows[static_cast<size_t>(r)]) = yb(r) * sign(rows[static_cast<size_t>(r)]);
  }
  sol.basis = cols;
  sol.objective = lp.c.dot(sol.x);
  sol.status = Status::kOptimal;
  return sol;
}

}  // namespace genwass::lp
