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

#include "genwass/flat_dual.hpp"

#include <cmath>

#include "genwass/error.hpp"
#include "genwass/genwass.hpp"
#include "genwass/lp.hpp"

namespace genwass {

namespace {

CommonSupport joint_support(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measures live in different dimensions");
  }
  return common_support({&mu, &nu});
}

// Appends the box columns s_i - t_i (cost 1 each) starting at column `first`.
void add_box_columns(lp::StandardFormLp& prog, Index n, Index first) {
  for (Index i = 0; i < n; ++i) {
    prog.A(i, first + 2 * i) = 1.0;
    prog.A(i, first + 2 * i + 1) = -1.0;
    prog.c(first + 2 * i) = 1.0;
    prog.c(first + 2 * i + 1) = 1.0;
  }
}

}  // namespace

FlatResult flat_metric(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const CommonSupport s = joint_support(mu, nu);
  const Index n = s.positions.cols();
  FlatResult out;
  out.potential.support = s.positions;
  out.potential.values = Eigen::VectorXd::Zero(n);
  if (n == 0) return out;
  const Eigen::VectorXd g = s.weights.col(0) - s.weights.col(1);

  // The LP dual of the potential problem: a flow y_ij on ordered pairs plus
  // box slacks s_i, t_i with divergence(y) + s - t = mu - nu. Its equality
  // multipliers f satisfy f_i - f_j <= |x_i - x_j| and |f_i| <= 1.
  const Index pairs = n * (n - 1);
  const Index cols = pairs + 2 * n;
  lp::StandardFormLp prog{Eigen::MatrixXd::Zero(n, cols), g,
                          Eigen::VectorXd::Zero(cols)};
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      prog.A(i, k) = 1.0;
      prog.A(j, k) = -1.0;
      prog.c(k) = (s.positions.col(i) - s.positions.col(j)).norm();
      ++k;
    }
  }
  add_box_columns(prog, n, pairs);
  const lp::Solution sol = lp::solve(prog);
  if (sol.status != lp::Status::kOptimal) {
    throw Error(ErrorCode::kSolverFailure, "flat metric LP failed");
  }
  out.potential.values = sol.y;
  out.potential.objective = sol.y.dot(g);
  out.value = out.potential.objective;
  return out;
}

double tv_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const CommonSupport s = joint_support(mu, nu);
  const Index n = s.positions.cols();
  if (n == 0) return 0.0;
  const Eigen::VectorXd g = s.weights.col(0) - s.weights.col(1);
  lp::StandardFormLp prog{Eigen::MatrixXd::Zero(n, 2 * n), g,
                          Eigen::VectorXd::Zero(2 * n)};
  add_box_columns(prog, n, 0);
  const lp::Solution sol = lp::solve(prog);
  if (sol.status != lp::Status::kOptimal) {
    throw Error(ErrorCode::kSolverFailure, "total variation LP failed");
  }
  return sol.y.dot(g);
}

FlatComparison verify_flat_equals_genwass(const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu) {
  FlatComparison rep;
  FlatResult flat = flat_metric(mu, nu);
  rep.flat = flat.value;
  rep.potential = std::move(flat.potential);
  rep.genwass = generalized_distance(mu, nu, GenWassParams{1.0, 1.0, 1.0}).W;
  rep.difference = std::abs(rep.flat - rep.genwass);
  return rep;
}

}  // namespace genwass
