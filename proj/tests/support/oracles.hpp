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
// Independent reference computations for the test suites. Everything here is
// deliberately brute force: dense LPs over the full coupling and a grid scan
// over the transported mass.

#ifndef GENWASS_TESTS_ORACLES_HPP_
#define GENWASS_TESTS_ORACLES_HPP_

#include <vector>

#include "genwass/genwass.hpp"
#include "genwass/measures.hpp"

namespace genwass::oracle {

// min sum c_ij g_ij over couplings with exact marginals; c = |x - y|^p.
double dense_lp_raw_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         double p);

// rho(m) = min sum c_ij g_ij s.t. row sums <= mu, col sums <= nu,
// sum g = m, g >= 0, solved as a dense LP for every query.
class PartialTransportLp {
 public:
  PartialTransportLp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);
  double rho(double m) const;
  double max_mass() const { return max_mass_; }

 private:
  DiscreteMeasure mu_, nu_;
  Eigen::MatrixXd cost_;
  double max_mass_ = 0.0;
};

struct BruteForceResult {
  double T = 0.0;
  double m = 0.0;
};

// Scans f(m) = a^p (|mu| + |nu| - 2m)^p + b^p m^{p-1} rho(m) on a uniform
// grid of `grid` points (rho from the LP at every point), then refines the
// best grid cell by golden-section search with the same LP.
class BruteForceT {
 public:
  BruteForceT(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
              int grid = 10000);
  BruteForceResult minimize(double a, double b) const;

 private:
  double f(double a, double b, double m, double rho) const;
  PartialTransportLp lp_;
  double p_;
  double mass_mu_, mass_nu_;
  std::vector<double> ms_, rhos_;
};

}  // namespace genwass::oracle

#endif  // GENWASS_TESTS_ORACLES_HPP_
