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

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "genwass/exact_ot.hpp"
#include "genwass/lp.hpp"

namespace genwass::oracle {

namespace {

lp::Solution must_solve(const lp::StandardFormLp& prog) {
  const lp::Solution s = lp::solve(prog);
  if (s.status != lp::Status::kOptimal) throw std::runtime_error("oracle LP failed");
  return s;
}

}  // namespace

double dense_lp_raw_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         double p) {
  const Index n = mu.size(), m = nu.size();
  if (n == 0 || m == 0) return 0.0;
  const Eigen::MatrixXd c = ground_cost(mu, nu, p);
  // Columns of nu are rescaled to mu's mass like the solver under test does.
  const Eigen::VectorXd target = nu.weights() * (mu.weights().sum() / nu.weights().sum());
  lp::StandardFormLp prog{Eigen::MatrixXd::Zero(n + m, n * m), Eigen::VectorXd(n + m),
                          Eigen::VectorXd(n * m)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      const Index k = i * m + j;
      prog.A(i, k) = 1.0;
      prog.A(n + j, k) = 1.0;
      prog.c(k) = c(i, j);
    }
  }
  prog.b << mu.weights(), target;
  return must_solve(prog).objective;
}

PartialTransportLp::PartialTransportLp(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu, double p)
    : mu_(mu), nu_(nu), cost_(ground_cost(mu, nu, p)),
      max_mass_(std::min(total_mass(mu), total_mass(nu))) {}

double PartialTransportLp::rho(double m) const {
  const Index n = mu_.size(), k = nu_.size();
  if (n == 0 || k == 0 || m <= 0.0) return 0.0;
  // Variables: g (n k), row slacks (n), column slacks (k).
  const Index cols = n * k + n + k;
  lp::StandardFormLp prog{Eigen::MatrixXd::Zero(n + k + 1, cols),
                          Eigen::VectorXd(n + k + 1), Eigen::VectorXd::Zero(cols)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < k; ++j) {
      const Index c = i * k + j;
      prog.A(i, c) = 1.0;
      prog.A(n + j, c) = 1.0;
      prog.A(n + k, c) = 1.0;
      prog.c(c) = cost_(i, j);
    }
    prog.A(i, n * k + i) = 1.0;
  }
  for (Index j = 0; j < k; ++j) prog.A(n + j, n * k + n + j) = 1.0;
  prog.b << mu_.weights(), nu_.weights(), std::min(m, max_mass_);
  return must_solve(prog).objective;
}

BruteForceT::BruteForceT(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         double p, int grid)
    : lp_(mu, nu, p), p_(p), mass_mu_(total_mass(mu)), mass_nu_(total_mass(nu)) {
  const double top = lp_.max_mass();
  const int points = top > 0.0 ? grid : 1;
  for (int i = 0; i < points; ++i) {
    const double m = points == 1 ? 0.0 : top * i / (points - 1);
    ms_.push_back(m);
    rhos_.push_back(lp_.rho(m));
  }
}

double BruteForceT::f(double a, double b, double m, double rho) const {
  const double discarded = std::max(0.0, mass_mu_ + mass_nu_ - 2.0 * m);
  const double transport = m > 0.0 ? std::pow(m, p_ - 1.0) * rho : 0.0;
  return std::pow(a * discarded, p_) + std::pow(b, p_) * transport;
}

BruteForceResult BruteForceT::minimize(double a, double b) const {
  size_t best = 0;
  for (size_t i = 1; i < ms_.size(); ++i) {
    if (f(a, b, ms_[i], rhos_[i]) < f(a, b, ms_[best], rhos_[best])) best = i;
  }
  BruteForceResult out{f(a, b, ms_[best], rhos_[best]), ms_[best]};
  if (ms_.size() < 3) return out;
  // f is convex for p in {1, 2}; a minimizer lies in the neighbouring cells.
  double lo = ms_[best == 0 ? 0 : best - 1];
  double hi = ms_[std::min(best + 1, ms_.size() - 1)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto g = [&](double m) { return f(a, b, m, lp_.rho(m)); };
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (f1 <= f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo); f1 = g(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo); f2 = g(x2);
    }
  }
  for (double m : {x1, x2, lo, hi}) {
    const double v = g(m);
    if (v < out.T) out = {v, m};
  }
  return out;
}

}  // namespace genwass::oracle
