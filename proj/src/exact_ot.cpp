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

#include "genwass/exact_ot.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genwass/error.hpp"
#include "genwass/lp.hpp"
#include "genwass/transport_flow.hpp"

namespace genwass {

// ---- TransferencePlan ------------------------------------------------------

TransferencePlan::TransferencePlan(Index rows, Index cols, double p,
                                   std::vector<PlanEntry> entries)
    : rows_(rows), cols_(cols), p_(p) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (const PlanEntry& e : entries) {
    if (e.i < 0 || e.i >= rows || e.j < 0 || e.j >= cols) {
      throw Error(ErrorCode::kSchemaViolation, "plan entry index out of range");
    }
    if (!(e.mass >= 0.0) || !std::isfinite(e.mass)) {
      throw Error(ErrorCode::kNegativeWeight, "plan entries must be >= 0");
    }
    if (e.mass == 0.0) continue;
    if (!entries_.empty() && entries_.back().i == e.i && entries_.back().j == e.j) {
      entries_.back().mass += e.mass;
    } else {
      entries_.push_back(e);
    }
  }
}

TransferencePlan TransferencePlan::from_dense(const Eigen::MatrixXd& gamma,
                                              double p) {
  std::vector<PlanEntry> entries;
  for (Index i = 0; i < gamma.rows(); ++i) {
    for (Index j = 0; j < gamma.cols(); ++j) {
      if (gamma(i, j) > 0.0) entries.push_back({i, j, gamma(i, j)});
    }
  }
  return TransferencePlan(gamma.rows(), gamma.cols(), p, std::move(entries));
}

Eigen::MatrixXd TransferencePlan::dense() const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const PlanEntry& e : entries_) g(e.i, e.j) += e.mass;
  return g;
}

Eigen::VectorXd TransferencePlan::row_sums() const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(rows_);
  for (const PlanEntry& e : entries_) r(e.i) += e.mass;
  return r;
}

Eigen::VectorXd TransferencePlan::col_sums() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols_);
  for (const PlanEntry& e : entries_) c(e.j) += e.mass;
  return c;
}

double TransferencePlan::total_mass() const {
  double s = 0.0;
  for (const PlanEntry& e : entries_) s += e.mass;
  return s;
}

double TransferencePlan::raw_cost(const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu) const {
  double s = 0.0;
  for (const PlanEntry& e : entries_) {
    const double d = (mu.position(e.i) - nu.position(e.j)).norm();
    s += e.mass * (p_ == 1.0 ? d : p_ == 2.0 ? d * d : std::pow(d, p_));
  }
  return s;
}

// ---- distances -------------------------------------------------------------

Eigen::MatrixXd ground_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double p) {
  if (mu.dim() != nu.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measures live in different dimensions");
  }
  Eigen::MatrixXd c(mu.size(), nu.size());
  for (Index i = 0; i < mu.size(); ++i) {
    for (Index j = 0; j < nu.size(); ++j) {
      const double d2 = (mu.position(i) - nu.position(j)).squaredNorm();
      c(i, j) = p == 2.0 ? d2 : p == 1.0 ? std::sqrt(d2) : std::pow(d2, 0.5 * p);
    }
  }
  return c;
}

double convention_distance(double mass, double raw_cost, double p) {
  if (mass <= 0.0 || raw_cost <= 0.0) return 0.0;
  if (p == 1.0) return raw_cost;
  if (p == 2.0) return std::sqrt(mass * raw_cost);
  return std::pow(mass, 1.0 - 1.0 / p) * std::pow(raw_cost, 1.0 / p);
}

namespace {

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::kInvalidParameter, "cost exponent p must be >= 1");
  }
}

// Returns nu's weights rescaled to mu's mass after checking near-equality.
Eigen::VectorXd matched_target_weights(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu) {
  const double mm = total_mass(mu);
  const double nm = total_mass(nu);
  const double scale = std::max(mm, nm);
  if (std::abs(mm - nm) > kEqualMassTol * scale) {
    throw Error(ErrorCode::kUnequalMass,
                "masses differ: " + std::to_string(mm) + " vs " +
                    std::to_string(nm));
  }
  if (nm == 0.0) return nu.weights();
  return nu.weights() * (mm / nm);
}

}  // namespace

WassersteinResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double p) {
  require_exponent(p);
  if (mu.dim() != nu.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measures live in different dimensions");
  }
  const Eigen::VectorXd target = matched_target_weights(mu, nu);
  WassersteinResult out;
  const double mass = total_mass(mu);
  if (mass == 0.0) {
    out.plan = TransferencePlan(mu.size(), nu.size(), p, {});
    return out;
  }
  const flow::Result r =
      flow::successive_shortest_paths(mu.weights(), target, ground_cost(mu, nu, p));
  out.plan = TransferencePlan::from_dense(r.flow, p);
  out.raw_cost = r.cost;
  out.distance = convention_distance(mass, r.cost, p);
  return out;
}

double marginal_residual(const TransferencePlan& plan, const DiscreteMeasure& mu,
                         const DiscreteMeasure& nu) {
  const double scale = std::max({total_mass(mu), total_mass(nu), 1e-300});
  const double r = (plan.row_sums() - mu.weights()).lpNorm<Eigen::Infinity>();
  const double c = (plan.col_sums() - nu.weights()).lpNorm<Eigen::Infinity>();
  return std::max(r, c) / scale;
}

// ---- plan restriction ------------------------------------------------------

RestrictedPlan restrict_plan(const TransferencePlan& plan,
                             const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             const DiscreteMeasure& mu_prime) {
  if (mu_prime.size() != mu.size() || mu_prime.dim() != mu.dim() ||
      mu_prime.positions() != mu.positions()) {
    throw Error(ErrorCode::kPrecondition,
                "mu' must be carried by the atoms of mu in the same order");
  }
  if (plan.rows() != mu.size() || plan.cols() != nu.size()) {
    throw Error(ErrorCode::kPrecondition, "plan does not match the measures");
  }
  const double tol = 1e-12 * std::max(1.0, total_mass(mu));
  Eigen::VectorXd factor = Eigen::VectorXd::Zero(mu.size());
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu_prime.weight(i) > mu.weight(i) + tol) {
      throw Error(ErrorCode::kPrecondition,
                  "mu' is not dominated by mu at atom " + std::to_string(i));
    }
    if (mu.weight(i) > 0.0) {
      factor(i) = std::min(1.0, mu_prime.weight(i) / mu.weight(i));
    }
  }
  std::vector<PlanEntry> entries;
  Eigen::VectorXd nu_w = Eigen::VectorXd::Zero(nu.size());
  for (const PlanEntry& e : plan.entries()) {
    const double m = e.mass * factor(e.i);
    if (m <= 0.0) continue;
    entries.push_back({e.i, e.j, m});
    nu_w(e.j) += m;
  }
  // Never exceed nu through rounding.
  nu_w = nu_w.cwiseMin(nu.weights());
  return {TransferencePlan(plan.rows(), plan.cols(), plan.p(), std::move(entries)),
          nu.with_weights(std::move(nu_w))};
}

SplitIdentityReport check_split_identity(const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu,
                                         const DiscreteMeasure& mu_prime, double p,
                                         double tol) {
  SplitIdentityReport rep;
  const WassersteinResult full = wasserstein(mu, nu, p);
  const RestrictedPlan part = restrict_plan(full.plan, mu, nu, mu_prime);

  const DiscreteMeasure mu_rest =
      mu.with_weights((mu.weights() - mu_prime.weights()).cwiseMax(0.0));
  const DiscreteMeasure nu_rest =
      nu.with_weights((nu.weights() - part.nu_prime.weights()).cwiseMax(0.0));
  const Eigen::MatrixXd rest_gamma = (full.plan.dense() - part.plan.dense()).cwiseMax(0.0);
  const TransferencePlan rest_plan = TransferencePlan::from_dense(rest_gamma, p);

  // Terms W_p^p / |.|^{p-1}, with the convention that an empty part adds 0.
  auto term = [p](double distance, double mass) {
    if (mass <= 0.0) return 0.0;
    return std::pow(distance, p) / std::pow(mass, p - 1.0);
  };

  const double m_all = total_mass(mu);
  const double m_part = total_mass(mu_prime);
  const double m_rest = total_mass(mu_rest);
  rep.lhs = term(full.distance, m_all);

  rep.restricted_plan_cost = part.plan.raw_cost(mu, nu);
  rep.complement_plan_cost = rest_plan.raw_cost(mu, nu);
  double w_part = 0.0, w_rest = 0.0;
  if (m_part > 0.0) {
    const WassersteinResult r = wasserstein(mu_prime, part.nu_prime, p);
    rep.restricted_optimum = r.raw_cost;
    w_part = r.distance;
  }
  if (m_rest > 0.0) {
    const WassersteinResult r = wasserstein(mu_rest, nu_rest, p);
    rep.complement_optimum = r.raw_cost;
    w_rest = r.distance;
  }
  rep.rhs = term(w_part, m_part) + term(w_rest, m_rest);

  const double scale = std::max(1.0, rep.lhs);
  rep.restricted_is_optimal =
      std::abs(rep.restricted_plan_cost - rep.restricted_optimum) <= tol * scale;
  rep.identity_holds = std::abs(rep.lhs - rep.rhs) <= tol * scale;
  return rep;
}

// ---- Kantorovich-Rubinstein dual -------------------------------------------

PotentialSolution kr_dual_solution(const DiscreteMeasure& mu,
                                   const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measures live in different dimensions");
  }
  const DiscreteMeasure target = nu.with_weights(matched_target_weights(mu, nu));
  const CommonSupport s = common_support({&mu, &target});
  const Index n = s.positions.cols();
  PotentialSolution out;
  out.support = s.positions;
  out.values = Eigen::VectorXd::Zero(n);
  if (n <= 1) return out;
  const Eigen::VectorXd signed_mass = s.weights.col(0) - s.weights.col(1);

  // Dual in standard form: a flow y_ij >= 0 on ordered pairs with divergence
  // equal to mu - nu; the equality multipliers are the potentials. The last
  // node's row is implied by the others and its potential is pinned to 0.
  const Index rows = n - 1;
  const Index cols = n * (n - 1);
  lp::StandardFormLp prog{Eigen::MatrixXd::Zero(rows, cols),
                          signed_mass.head(rows), Eigen::VectorXd(cols)};
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (i < rows) prog.A(i, k) = 1.0;
      if (j < rows) prog.A(j, k) = -1.0;
      prog.c(k) = (s.positions.col(i) - s.positions.col(j)).norm();
      ++k;
    }
  }
  const lp::Solution sol = lp::solve(prog);
  if (sol.status != lp::Status::kOptimal) {
    throw Error(ErrorCode::kSolverFailure, "Kantorovich-Rubinstein LP failed");
  }
  out.values.head(rows) = sol.y;
  out.objective = out.values.dot(signed_mass);
  return out;
}

double kr_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return kr_dual_solution(mu, nu).objective;
}

}  // namespace genwass
