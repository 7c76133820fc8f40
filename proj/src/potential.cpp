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

#include "genwass/potential.hpp"

#include <algorithm>
#include <cmath>

namespace genwass {

double PotentialSolution::box_violation() const {
  if (values.size() == 0) return 0.0;
  return std::max(0.0, values.cwiseAbs().maxCoeff() - 1.0);
}

double PotentialSolution::lipschitz_violation() const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    for (Eigen::Index j = i + 1; j < values.size(); ++j) {
      const double gap = std::abs(values(i) - values(j)) -
                         (support.col(i) - support.col(j)).norm();
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

}  // namespace genwass
