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

#include "doctest.h"
#include "genwass/lp.hpp"

using namespace genwass;

TEST_CASE("small LP with known optimum and duals") {
  // min -x1 - 2 x2  s.t. x1 + x2 + s1 = 4, x2 + s2 = 3.
  lp::StandardFormLp prog{Eigen::MatrixXd(2, 4), Eigen::Vector2d(4, 3),
                          Eigen::Vector4d(-1, -2, 0, 0)};
  prog.A << 1, 1, 1, 0, 0, 1, 0, 1;
  const lp::Solution s = lp::solve(prog);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.objective == doctest::Approx(-7.0).epsilon(1e-14));
  CHECK(s.x(0) == doctest::Approx(1.0));
  CHECK(s.x(1) == doctest::Approx(3.0));
  CHECK((prog.A.transpose() * s.y - prog.c).maxCoeff() <= 1e-12);
  CHECK(prog.b.dot(s.y) == doctest::Approx(s.objective).epsilon(1e-14));
}

TEST_CASE("infeasible and unbounded programs") {
  lp::StandardFormLp infeasible{Eigen::MatrixXd::Ones(1, 2), Eigen::VectorXd::Constant(1, -1.0),
                                Eigen::VectorXd::Ones(2)};
  CHECK(lp::solve(infeasible).status == lp::Status::kInfeasible);
  lp::StandardFormLp unbounded{Eigen::MatrixXd(1, 2), Eigen::VectorXd::Constant(1, 1.0),
                               Eigen::Vector2d(0, -1)};
  unbounded.A << 1, -1;
  CHECK(lp::solve(unbounded).status == lp::Status::kUnbounded);
}

TEST_CASE("redundant equality rows") {
  // Transport 2x2 with all four marginal rows (one is implied).
  lp::StandardFormLp prog{Eigen::MatrixXd::Zero(4, 4), Eigen::Vector4d(1, 2, 1.5, 1.5),
                          Eigen::Vector4d(0, 1, 1, 0)};
  prog.A << 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1;
  const lp::Solution s = lp::solve(prog);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.objective == doctest::Approx(0.5).epsilon(1e-14));
  CHECK((prog.A * s.x - prog.b).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((prog.A.transpose() * s.y - prog.c).maxCoeff() <= 1e-12);
}
