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

// Classical optimal transport between equal-mass discrete measures.
//
// Mass convention: for measures of common mass M and an optimal unnormalized
// plan gamma (entry (i,j) = mass sent from atom i to atom j),
//
//   W_p(mu, nu) = M^{1 - 1/p} * (sum_ij gamma_ij |x_i - y_j|^p)^{1/p},
//
// i.e. the mass times the p-th root of the mean cost under the probability
// plan gamma / M. With this convention W_p(k mu, k nu) = k W_p(mu, nu). Most
// transport libraries drop the mass factor; values differ unless M = 1.

#ifndef GENWASS_EXACT_OT_HPP_
#define GENWASS_EXACT_OT_HPP_

#include <Eigen/Dense>

#include <vector>

#include "genwass/measures.hpp"
#include "genwass/potential.hpp"

namespace genwass {

struct PlanEntry {
  Index i = 0;
  Index j = 0;
  double mass = 0.0;
};

class TransferencePlan {
 public:
  TransferencePlan() = default;
  // Entries are sorted by (i, j); duplicates are summed, zero entries dropped.
  TransferencePlan(Index rows, Index cols, double p,
                   std::vector<PlanEntry> entries);
  static TransferencePlan from_dense(const Eigen::MatrixXd& gamma, double p);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double p() const { return p_; }
  const std::vector<PlanEntry>& entries() const { return entries_; }

  Eigen::MatrixXd dense() const;
  Eigen::VectorXd row_sums() const;
  Eigen::VectorXd col_sums() const;
  double total_mass() const;
  // sum gamma_ij |x_i - y_j|^p for the plan's own exponent.
  double raw_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  double p_ = 1.0;
  std::vector<PlanEntry> entries_;
};

struct WassersteinResult {
  double distance = 0.0;
  double raw_cost = 0.0;
  TransferencePlan plan;
};

// Matrix of |x_i - y_j|^p.
Eigen::MatrixXd ground_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double p);

// M^{1-1/p} raw^{1/p} (0 for M = 0).
double convention_distance(double mass, double raw_cost, double p);

// Relative tolerance for treating two masses as equal.
inline constexpr double kEqualMassTol = 1e-9;

// Exact optimum. Throws kUnequalMass, kInvalidParameter (p < 1) and
// kDimensionMismatch.
WassersteinResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double p);

// Largest |marginal - weight| relative to the total mass.
double marginal_residual(const TransferencePlan& plan, const DiscreteMeasure& mu,
                         const DiscreteMeasure& nu);

struct RestrictedPlan {
  TransferencePlan plan;
  DiscreteMeasure nu_prime;
};

// Scales row i of the plan by mu_prime_i / mu_i. `mu_prime` must be carried
// by the atoms of `mu` (same positions, same order) with weights <= mu's.
RestrictedPlan restrict_plan(const TransferencePlan& plan,
                             const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             const DiscreteMeasure& mu_prime);

struct SplitIdentityReport {
  double lhs = 0.0;                 // W_p^p(mu,nu) / |mu|^{p-1}
  double rhs = 0.0;                 // restricted + complement terms
  double restricted_plan_cost = 0;  // raw cost of the restricted plan
  double restricted_optimum = 0;    // raw cost after re-solving (mu', nu')
  double complement_plan_cost = 0;
  double complement_optimum = 0;
  bool restricted_is_optimal = false;
  bool identity_holds = false;
  bool passed() const { return restricted_is_optimal && identity_holds; }
};

SplitIdentityReport check_split_identity(const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu,
                                         const DiscreteMeasure& mu_prime, double p,
                                         double tol = 1e-9);

// Kantorovich-Rubinstein potential LP on the union of supports:
// sup sum f_i (mu_i - nu_i) s.t. |f_i - f_j| <= |x_i - x_j|.
PotentialSolution kr_dual_solution(const DiscreteMeasure& mu,
                                   const DiscreteMeasure& nu);
double kr_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace genwass

#endif  // GENWASS_EXACT_OT_HPP_
