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

#include "genwass/random.hpp"

#include "genwass/error.hpp"

namespace genwass {

DiscreteMeasure random_measure(std::mt19937_64& rng, const RandomMeasureOptions& o) {
  if (o.dim < 1 || o.min_atoms < 0 || o.max_atoms < o.min_atoms ||
      !(o.min_mass >= 0.0) || o.max_mass < o.min_mass) {
    throw Error(ErrorCode::kInvalidParameter, "invalid random measure options");
  }
  std::uniform_int_distribution<int> count(o.min_atoms, o.max_atoms);
  std::uniform_real_distribution<double> coord(-o.box, o.box);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  Eigen::MatrixXd P(o.dim, n);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < o.dim; ++d) P(d, i) = coord(rng);
    w(i) = 0.05 + unit(rng);
  }
  const double mass = o.min_mass + (o.max_mass - o.min_mass) * unit(rng);
  if (n > 0) w *= mass / w.sum();
  return DiscreteMeasure(P, w).normalized();
}

DiscreteMeasure random_sub_measure(std::mt19937_64& rng, const DiscreteMeasure& m) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd w = m.weights();
  for (Index i = 0; i < w.size(); ++i) {
    const double u = unit(rng);
    w(i) *= u < 0.2 ? 0.0 : u < 0.4 ? 1.0 : unit(rng);
  }
  return m.with_weights(w);
}

}  // namespace genwass
