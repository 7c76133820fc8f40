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

#include "genwass/transport_flow.hpp"

#include <algorithm>
#include <cmath>

namespace genwass::flow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Result successive_shortest_paths(const Eigen::VectorXd& supply,
                                 const Eigen::VectorXd& demand,
                                 const Eigen::MatrixXd& cost,
                                 double mass_limit) {
  const Eigen::Index n = supply.size();
  const Eigen::Index m = demand.size();
  const Eigen::Index num_nodes = n + m + 2;
  const Eigen::Index S = 0, T = n + m + 1;
  auto row_node = [](Eigen::Index i) { return 1 + i; };
  auto col_node = [n](Eigen::Index j) { return 1 + n + j; };

  Result res;
  res.flow = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd row_left = supply;
  Eigen::VectorXd col_left = demand;
  const double eps =
      1e-15 * std::max({1.0, supply.sum(), demand.sum()});
  const double target = std::min({mass_limit, supply.sum(), demand.sum()});

  Eigen::VectorXd pot = Eigen::VectorXd::Zero(num_nodes);
  Eigen::VectorXd dist(num_nodes);
  std::vector<Eigen::Index> pred(static_cast<size_t>(num_nodes));
  std::vector<char> done(static_cast<size_t>(num_nodes));

  while (res.mass < target - eps) {
    dist.setConstant(kInf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    dist(S) = 0.0;

    auto relax = [&](Eigen::Index u, Eigen::Index v, double reduced) {
      const double d = dist(u) + std::max(reduced, 0.0);
      if (d < dist(v)) {
        dist(v) = d;
        pred[static_cast<size_t>(v)] = u;
      }
    };

    for (;;) {
      Eigen::Index u = -1;
      double best = kInf;
      for (Eigen::Index v = 0; v < num_nodes; ++v) {
        if (!done[static_cast<size_t>(v)] && dist(v) < best) {
          best = dist(v);
          u = v;
        }
      }
      if (u < 0 || u == T) break;
      done[static_cast<size_t>(u)] = 1;
      if (u == S) {
        for (Eigen::Index i = 0; i < n; ++i) {
          if (row_left(i) > eps) relax(S, row_node(i), pot(S) - pot(row_node(i)));
        }
      } else if (u <= n) {
        const Eigen::Index i = u - 1;
        for (Eigen::Index j = 0; j < m; ++j) {
          const Eigen::Index v = col_node(j);
          if (!done[static_cast<size_t>(v)]) relax(u, v, cost(i, j) + pot(u) - pot(v));
        }
      } else {
        const Eigen::Index j = u - 1 - n;
        for (Eigen::Index i = 0; i < n; ++i) {
          const Eigen::Index v = row_node(i);
          if (res.flow(i, j) > eps && !done[static_cast<size_t>(v)]) {
            relax(u, v, -cost(i, j) + pot(u) - pot(v));
          }
        }
        if (col_left(j) > eps) relax(u, T, pot(u) - pot(T));
      }
    }
    if (!(dist(T) < kInf)) break;

    const double dT = dist(T);
    for (Eigen::Index v = 0; v < num_nodes; ++v) pot(v) += std::min(dist(v), dT);

    // Walk the path back from T, collecting bottleneck and true cost.
    double push = target - res.mass;
    double path_cost = 0.0;
    for (Eigen::Index v = T; v != S; v = pred[static_cast<size_t>(v)]) {
      const Eigen::Index u = pred[static_cast<size_t>(v)];
      if (v == T) {
        push = std::min(push, col_left(u - 1 - n));
      } else if (u == S) {
        push = std::min(push, row_left(v - 1));
      } else if (u <= n) {  // forward row -> col
        path_cost += cost(u - 1, v - 1 - n);
      } else {  // backward col -> row
        push = std::min(push, res.flow(v - 1, u - 1 - n));
        path_cost -= cost(v - 1, u - 1 - n);
      }
    }
    for (Eigen::Index v = T; v != S; v = pred[static_cast<size_t>(v)]) {
      const Eigen::Index u = pred[static_cast<size_t>(v)];
      if (v == T) {
        double& left = col_left(u - 1 - n);
        left -= push;
        if (left <= eps) left = 0.0;
      } else if (u == S) {
        double& left = row_left(v - 1);
        left -= push;
        if (left <= eps) left = 0.0;
      } else if (u <= n) {
        res.flow(u - 1, v - 1 - n) += push;
      } else {
        double& f = res.flow(v - 1, u - 1 - n);
        f -= push;
        if (f <= eps) f = 0.0;
      }
    }

    // Path lengths are nondecreasing in exact arithmetic; absorb rounding.
    if (!res.segments.empty()) {
      const double prev = res.segments.back().slope;
      if (path_cost < prev && prev - path_cost <= 1e-12 * (1.0 + std::abs(prev))) {
        path_cost = prev;
      }
    }
    res.segments.push_back({path_cost, push});
    res.mass += push;
  }

  res.cost = (res.flow.array() * cost.array()).sum();
  return res;
}

}  // namespace genwass::flow
