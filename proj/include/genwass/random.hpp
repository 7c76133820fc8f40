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
// Seeded generators for property sweeps. Positions are drawn from a
// continuous distribution, so coincident atoms do not occur.

#ifndef GENWASS_RANDOM_HPP_
#define GENWASS_RANDOM_HPP_

#include <random>

#include "genwass/measures.hpp"

namespace genwass {

struct RandomMeasureOptions {
  int dim = 1;
  int min_atoms = 1;
  int max_atoms = 10;
  double min_mass = 0.0;
  double max_mass = 5.0;
  double box = 3.0;  // coordinates in [-box, box]
};

DiscreteMeasure random_measure(std::mt19937_64& rng, const RandomMeasureOptions& o);

// Same support as `m`, each weight scaled by an independent factor in
// [0, 1] (some factors are exactly 0 or 1).
DiscreteMeasure random_sub_measure(std::mt19937_64& rng, const DiscreteMeasure& m);

}  // namespace genwass

#endif  // GENWASS_RANDOM_HPP_
