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

#include "genwass/genwass.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "genwass/error.hpp"
#include "genwass/transport_flow.hpp"

namespace genwass {

void GenWassParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::kInvalidParameter, "a must be > 0");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidParameter, "b must be > 0");
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::kInvalidParameter, "p must be >= 1");
  }
}

// ---- PartialCostCurve ------------------------------------------------------

PartialCostCurve::PartialCostCurve() : masses_{0.0}, costs_{0.0} {}

PartialCostCurve::PartialCostCurve(const std::vector<double>& slopes,
                                   const std::vector<double>& lengths)
    : PartialCostCurve() {
  for (size_t k = 0; k < slopes.size(); ++k) {
    if (lengths[k] <= 0.0) continue;
    slopes_.push_back(slopes[k]);
    masses_.push_back(masses_.back() + lengths[k]);
    costs_.push_back(costs_.back() + slopes[k] * lengths[k]);
  }
}

double PartialCostCurve::operator()(double m) const {
  if (m <= 0.0 || slopes_.empty()) return 0.0;
  const auto it = std::upper_bound(masses_.begin(), masses_.end(), m);
  if (it == masses_.end()) return costs_.back();
  const size_t k = static_cast<size_t>(it - masses_.begin()) - 1;
  return costs_[k] + slopes_[k] * (m - masses_[k]);
}

namespace {

PartialCostCurve curve_from(const flow::Result& r, double mass_cap) {
  std::vector<double> slopes, lengths;
  for (const flow::Segment& s : r.segments) {
    slopes.push_back(s.slope);
    lengths.push_back(s.length);
  }
  // Snap the accumulated mass onto min(|mu|, |nu|) when they agree up to
  // rounding.
  double total = 0.0;
  for (double l : lengths) total += l;
  if (!lengths.empty() && std::abs(total - mass_cap) <= 1e-12 * std::max(1.0, mass_cap)) {
    lengths.back() += mass_cap - total;
  }
  return PartialCostCurve(slopes, lengths);
}

double ipow(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

}  // namespace

PartialCostCurve partial_cost_curve(const DiscreteMeasure& mu,
                                    const DiscreteMeasure& nu, double p) {
  if (!(p >= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "p must be >= 1");
  }
  const flow::Result r = flow::successive_shortest_paths(
      mu.weights(), nu.weights(), ground_cost(mu, nu, p));
  return curve_from(r, std::min(total_mass(mu), total_mass(nu)));
}

double outer_objective(const PartialCostCurve& curve, double mass_mu,
                       double mass_nu, const GenWassParams& params, double m) {
  const double discarded = std::max(0.0, mass_mu + mass_nu - 2.0 * m);
  const double transport =
      m > 0.0 ? ipow(m, params.p - 1.0) * curve(m) : 0.0;
  return ipow(params.a * discarded, params.p) +
         ipow(params.b, params.p) * transport;
}

namespace {

// Smallest minimizer of the outer objective.
std::pair<double, bool> minimize_outer(const PartialCostCurve& curve,
                                       double mass_mu, double mass_nu,
                                       const GenWassParams& prm) {
  const auto& ms = curve.masses();
  const auto& rho = curve.costs();
  const auto& slopes = curve.slopes();
  const double S = mass_mu + mass_nu;
  const double a = prm.a, b = prm.b;

  if (prm.p == 1.0) {
    // f is piecewise linear with slope -2a + b s_k on segment k.
    for (size_t k = 0; k < slopes.size(); ++k) {
      if (b * slopes[k] - 2.0 * a >= 0.0) return {ms[k], true};
    }
    return {curve.max_mass(), true};
  }

  if (prm.p == 2.0) {
    // On segment k, rho = alpha + s m and f is a convex quadratic in m.
    for (size_t k = 0; k < slopes.size(); ++k) {
      const double s = slopes[k];
      const double alpha = rho[k] - s * ms[k];
      const double right = ms[k + 1];
      const double slope_right =
          -4.0 * a * a * (S - 2.0 * right) + b * b * (alpha + 2.0 * s * right);
      if (slope_right >= 0.0) {
        const double m = (4.0 * a * a * S - b * b * alpha) /
                         (8.0 * a * a + 2.0 * b * b * s);
        return {std::clamp(m, ms[k], right), true};
      }
    }
    return {curve.max_mass(), true};
  }

  // General p: golden-section search on each segment, keep the best.
  auto f = [&](double m) { return outer_objective(curve, mass_mu, mass_nu, prm, m); };
  double best_m = 0.0;
  double best_f = f(0.0);
  auto consider = [&](double m) {
    const double v = f(m);
    if (v < best_f - 1e-14 * std::max(1.0, std::abs(best_f))) {
      best_f = v;
      best_m = m;
    }
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (size_t k = 0; k < slopes.size(); ++k) {
    double lo = ms[k], hi = ms[k + 1];
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-10) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = f(x2);
      }
    }
    consider(ms[k]);
    consider(0.5 * (lo + hi));
    consider(ms[k + 1]);
  }
  return {best_m, false};
}

bool lexicographically_before(const DiscreteMeasure& x, const DiscreteMeasure& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (Index i = 0; i < x.size(); ++i) {
    for (Index d = 0; d < x.dim(); ++d) {
      if (x.positions()(d, i) != y.positions()(d, i)) {
        return x.positions()(d, i) < y.positions()(d, i);
      }
    }
    if (x.weight(i) != y.weight(i)) return x.weight(i) < y.weight(i);
  }
  return false;
}

GenWassSolution solve_oriented(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const GenWassParams& params) {
  GenWassSolution sol;
  sol.params = params;
  sol.mass_mu = total_mass(mu);
  sol.mass_nu = total_mass(nu);
  const Eigen::MatrixXd cost = ground_cost(mu, nu, params.p);
  const flow::Result full =
      flow::successive_shortest_paths(mu.weights(), nu.weights(), cost);
  sol.curve = curve_from(full, std::min(sol.mass_mu, sol.mass_nu));

  auto [m_star, certified] =
      minimize_outer(sol.curve, sol.mass_mu, sol.mass_nu, params);
  sol.m_star = m_star;
  sol.certified = certified;

  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(mu.size(), nu.size());
  if (m_star > 0.0) {
    gamma = flow::successive_shortest_paths(mu.weights(), nu.weights(), cost, m_star)
                .flow;
  }
  sol.plan = TransferencePlan::from_dense(gamma, params.p);
  sol.tilde_mu = mu.with_weights(gamma.rowwise().sum().cwiseMin(mu.weights()));
  sol.tilde_nu = nu.with_weights(gamma.colwise().sum().transpose().cwiseMin(nu.weights()));

  const double snap = 1e-13 * std::max({1.0, sol.mass_mu, sol.mass_nu});
  for (int side = 0; side < 2; ++side) {
    double d = (side == 0 ? sol.mass_mu : sol.mass_nu) - m_star;
    sol.discarded[static_cast<size_t>(side)] = d <= snap ? 0.0 : d;
  }
  const double transport =
      m_star > 0.0 ? ipow(m_star, params.p - 1.0) * sol.curve(m_star) : 0.0;
  sol.T = ipow(params.a * (sol.discarded[0] + sol.discarded[1]), params.p) +
          ipow(params.b, params.p) * transport;
  sol.W = params.p == 1.0 ? sol.T
          : params.p == 2.0 ? std::sqrt(sol.T)
                            : std::pow(sol.T, 1.0 / params.p);
  return sol;
}

}  // namespace

GenWassSolution generalized_distance(const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu,
                                     const GenWassParams& params) {
  params.validate();
  if (mu.dim() != nu.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measures live in different dimensions");
  }
  // Solve in a canonical orientation so that the value is exactly symmetric.
  if (!lexicographically_before(nu, mu)) return solve_oriented(mu, nu, params);
  GenWassSolution s = solve_oriented(nu, mu, params);
  std::swap(s.tilde_mu, s.tilde_nu);
  std::swap(s.discarded[0], s.discarded[1]);
  std::swap(s.mass_mu, s.mass_nu);
  s.plan = TransferencePlan::from_dense(s.plan.dense().transpose(), params.p);
  return s;
}

double witness_value(const GenWassSolution& s, const DiscreteMeasure& mu,
                     const DiscreteMeasure& nu) {
  const double p = s.params.p;
  const double m = total_mass(s.tilde_mu);
  const double discarded =
      std::max(0.0, total_mass(mu) - m) + std::max(0.0, total_mass(nu) - total_mass(s.tilde_nu));
  const double transport = m > 0.0 ? ipow(m, p - 1.0) * s.plan.raw_cost(mu, nu) : 0.0;
  return ipow(s.params.a * discarded, p) + ipow(s.params.b, p) * transport;
}

MetricAxiomReport metric_axiom_suite(const std::vector<MeasureTriple>& instances,
                                     const GenWassParams& params,
                                     double triangle_slack) {
  MetricAxiomReport rep;
  rep.worst_triangle_slack = std::numeric_limits<double>::infinity();
  int index = 0;
  for (const MeasureTriple& t : instances) {
    auto W = [&](const DiscreteMeasure& x, const DiscreteMeasure& y) {
      return generalized_distance(x, y, params).W;
    };
    const double mn = W(t.mu, t.nu), nm = W(t.nu, t.mu);
    const double nl = W(t.nu, t.lambda), ml = W(t.mu, t.lambda);
    const double mm = W(t.mu, t.mu);
    std::ostringstream tag;
    tag << "triple " << index;
    if (mn != nm) {
      ++rep.symmetry_violations;
      rep.failures.push_back(tag.str() + ": asymmetric");
    }
    const bool equal = same_measure(t.mu, t.nu);
    if (mm != 0.0 || (equal != (mn == 0.0))) {
      ++rep.identity_violations;
      rep.failures.push_back(tag.str() + ": identity of indiscernibles");
    }
    const double slack = mn + nl - ml;
    rep.worst_triangle_slack = std::min(rep.worst_triangle_slack, slack);
    if (slack < -triangle_slack) {
      ++rep.triangle_violations;
      rep.failures.push_back(tag.str() + ": triangle inequality");
    }
    ++rep.triples;
    ++index;
  }
  if (instances.empty()) rep.worst_triangle_slack = 0.0;
  return rep;
}

IntegralBoundReport integral_bound_check(const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu,
                                         const TestFunction& f,
                                         const GenWassParams& params) {
  IntegralBoundReport rep;
  rep.lhs = std::abs(integrate(f, mu) - integrate(f, nu));
  const double w = generalized_distance(mu, nu, params).W;
  rep.rhs = std::sqrt(2.0) *
                std::max(f.sup_norm() / params.a, f.lipschitz() / params.b) * w +
            1e-9;
  return rep;
}

}  // namespace genwass
