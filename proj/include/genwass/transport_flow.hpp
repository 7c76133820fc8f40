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

// Successive shortest paths on the bipartite transport network
//
//   S --(supply_i, 0)--> row i --(inf, cost_ij)--> col j --(demand_j, 0)--> T
//
// Every augmentation pushes flow along a currently shortest S-T path, so the
// sequence of path lengths is nondecreasing and the optimal partial-transport
// cost as a function of the transported mass is the piecewise linear curve
// whose segments are (path length, pushed amount). Dijkstra runs on reduced
// costs with node potentials; ties are broken by the lowest node index so
// the result is a deterministic function of the input.

#ifndef GENWASS_TRANSPORT_FLOW_HPP_
#define GENWASS_TRANSPORT_FLOW_HPP_

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace genwass::flow {

struct Segment {
  double slope = 0.0;   // cost per unit mass of this augmentation
  double length = 0.0;  // mass pushed
};

struct Result {
  Eigen::MatrixXd flow;           // rows x cols, mass moved from i to j
  std::vector<Segment> segments;  // in augmentation order
  double mass = 0.0;              // total transported mass
  double cost = 0.0;              // sum flow_ij * cost_ij
};

// Pushes mass until `mass_limit` is reached or no augmenting path is left.
// `supply`, `demand` >= 0; `cost` is rows x cols and >= 0.
Result successive_shortest_paths(
    const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
    const Eigen::MatrixXd& cost,
    double mass_limit = std::numeric_limits<double>::infinity());

}  // namespace genwass::flow

#endif  // GENWASS_TRANSPORT_FLOW_HPP_
