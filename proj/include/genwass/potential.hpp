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

#ifndef GENWASS_POTENTIAL_HPP_
#define GENWASS_POTENTIAL_HPP_

#include <Eigen/Dense>

namespace genwass {

// A test function sampled on a finite support: values(i) = f(positions.col(i)).
struct PotentialSolution {
  Eigen::MatrixXd support;  // dim x n
  Eigen::VectorXd values;
  double objective = 0.0;   // sum_i values(i) * (mu_i - nu_i)

  // max_i (|f_i| - 1)^+ ; 0 when every |f_i| <= 1.
  double box_violation() const;
  // max_{i,j} (|f_i - f_j| - |x_i - x_j|)^+.
  double lipschitz_violation() const;
};

}  // namespace genwass

#endif  // GENWASS_POTENTIAL_HPP_
