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

//
// Flat (bounded-Lipschitz) metric
//
//   d(mu, nu) = sup { int f d(mu - nu) : |f| <= 1, Lip(f) <= 1 }
//
// computed as a finite LP over the union of the two supports. Restricting f
// to the support loses nothing: a feasible f on finitely many points extends
// to R^d by the McShane extension clipped to [-1, 1], which keeps both the
// sup-norm and the Lipschitz bound.

#ifndef GENWASS_FLAT_DUAL_HPP_
#define GENWASS_FLAT_DUAL_HPP_

#include "genwass/measures.hpp"
#include "genwass/potential.hpp"

namespace genwass {

struct FlatResult {
  double value = 0.0;
  PotentialSolution potential;
};

FlatResult flat_metric(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// sup over |f| <= 1 only; equals tv_norm(mu - nu).
double tv_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct FlatComparison {
  double flat = 0.0;
  double genwass = 0.0;  // W_1^{1,1}
  double difference = 0.0;
  PotentialSolution potential;
  bool passed(double tol = 1e-6) const { return difference <= tol; }
};

FlatComparison verify_flat_equals_genwass(const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu);

}  // namespace genwass

#endif  // GENWASS_FLAT_DUAL_HPP_
