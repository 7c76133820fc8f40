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

// Dense two-phase simplex for small linear programs in standard form
//
//   minimize c^T x  subject to  A x = b,  x >= 0.
//
// Intended for desk-scale problems (a few hundred rows at most). The final
// basis is refactorized with a pivoted LU so that the returned primal point
// and dual multipliers are accurate to roughly machine precision times the
// condition number of the basis rather than accumulating tableau drift.

#ifndef GENWASS_LP_HPP_
#define GENWASS_LP_HPP_

#include <Eigen/Dense>

#include <vector>

namespace genwass::lp {

struct StandardFormLp {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-11;
  double pivot_tol = 1e-12;
  int max_iterations = 100000;
};

struct Solution {
  Status status = Status::kIterationLimit;
  Eigen::VectorXd x;  // primal point
  Eigen::VectorXd y;  // equality multipliers: A^T y <= c, b^T y = c^T x
  double objective = 0.0;
  std::vector<Eigen::Index> basis;
  int iterations = 0;
};

Solution solve(const StandardFormLp& lp, const Options& options = {});

}  // namespace genwass::lp

#endif  // GENWASS_LP_HPP_
