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

// Generalized Wasserstein distance between measures of arbitrary mass:
//
//   T(mu, nu) = inf a^p (|mu - mu~| + |nu - nu~|)^p + b^p W_p^p(mu~, nu~),
//   W(mu, nu) = T^{1/p},
//
// over mu~ <= mu, nu~ <= nu with |mu~| = |nu~| = m. W_p uses the mass
// convention of exact_ot.hpp, so W_p^p(mu~, nu~) = m^{p-1} rho(m) where rho(m)
// is the optimal raw cost of moving mass m (partial transport). rho is convex
// piecewise linear and comes out of successive shortest paths; the outer
// problem is a one-dimensional minimization over m in [0, min(|mu|, |nu|)].

#ifndef GENWASS_GENWASS_HPP_
#define GENWASS_GENWASS_HPP_

#include <array>
#include <string>
#include <vector>

#include "genwass/exact_ot.hpp"
#include "genwass/measures.hpp"
#include "genwass/test_functions.hpp"

namespace genwass {

struct GenWassParams {
  double a = 1.0;  // weight of created/removed mass
  double b = 1.0;  // weight of transport
  double p = 1.0;

  // Throws kInvalidParameter unless a > 0, b > 0, p >= 1.
  void validate() const;
};

class PartialCostCurve {
 public:
  PartialCostCurve();
  // Builds the curve from augmentation segments (slope, length).
  PartialCostCurve(const std::vector<double>& slopes,
                   const std::vector<double>& lengths);

  // Breakpoints (m_k, rho_k), starting at (0, 0).
  const std::vector<double>& masses() const { return masses_; }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double max_mass() const { return masses_.back(); }
  size_t segment_count() const { return slopes_.size(); }

  // rho(m) for m in [0, max_mass()], linear between breakpoints.
  double operator()(double m) const;

 private:
  std::vector<double> masses_;
  std::vector<double> costs_;
  std::vector<double> slopes_;
};

PartialCostCurve partial_cost_curve(const DiscreteMeasure& mu,
                                    const DiscreteMeasure& nu, double p);

// f(m) = a^p (|mu| + |nu| - 2m)^p + b^p m^{p-1} rho(m).
double outer_objective(const PartialCostCurve& curve, double mass_mu,
                       double mass_nu, const GenWassParams& params, double m);

struct GenWassSolution {
  GenWassParams params;
  double T = 0.0;
  double W = 0.0;
  double m_star = 0.0;
  // Witnesses carried by the atoms of mu and nu (zero weights allowed) so that
  // plan indices refer to the input atoms.
  DiscreteMeasure tilde_mu;
  DiscreteMeasure tilde_nu;
  TransferencePlan plan;
  std::array<double, 2> discarded{0.0, 0.0};
  // False for exponents outside {1, 2}: minimum located numerically only.
  bool certified = true;
  PartialCostCurve curve;
  double mass_mu = 0.0;
  double mass_nu = 0.0;
};

GenWassSolution generalized_distance(const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu,
                                     const GenWassParams& params);

// T recomputed from the witness (discarded mass + plan cost).
double witness_value(const GenWassSolution& s, const DiscreteMeasure& mu,
                     const DiscreteMeasure& nu);

struct MeasureTriple {
  DiscreteMeasure mu, nu, lambda;
};

struct MetricAxiomReport {
  int triples = 0;
  int symmetry_violations = 0;
  int identity_violations = 0;
  int triangle_violations = 0;
  double worst_triangle_slack = 0.0;  // min of W(mu,nu)+W(nu,l)-W(mu,l)
  std::vector<std::string> failures;
  bool passed() const {
    return symmetry_violations == 0 && identity_violations == 0 &&
           triangle_violations == 0;
  }
};

MetricAxiomReport metric_axiom_suite(const std::vector<MeasureTriple>& instances,
                                     const GenWassParams& params,
                                     double triangle_slack = 1e-9);

struct IntegralBoundReport {
  double lhs = 0.0;  // |int f dmu - int f dnu|
  double rhs = 0.0;  // sqrt(2) max(|f|_inf / a, |f|_Lip / b) W + 1e-9
  bool passed() const { return lhs <= rhs; }
};

// Valid for p in {1, 2}.
IntegralBoundReport integral_bound_check(const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu,
                                         const TestFunction& f,
                                         const GenWassParams& params);

}  // namespace genwass

#endif  // GENWASS_GENWASS_HPP_
