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

#include "genwass/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "genwass/error.hpp"
#include "genwass/exact_ot.hpp"

namespace genwass {

// ---- SourceSpec ------------------------------------------------------------

SourceSpec::SourceSpec(int dim)
    : pieces_{SourcePiece{0.0, 1.0, SignedDiscreteMeasure(dim)}}, dim_(dim) {}

SourceSpec::SourceSpec(std::vector<SourcePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) {
    throw Error(ErrorCode::kSchemaViolation, "source needs at least one piece");
  }
  dim_ = pieces_.front().rate.dim();
  double expected = 0.0;
  for (const SourcePiece& p : pieces_) {
    if (p.rate.dim() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "source pieces live in different dimensions");
    }
    if (!std::isfinite(p.t0) || !std::isfinite(p.t1)) {
      throw Error(ErrorCode::kNonFinite, "source piece has non-finite times");
    }
    if (p.t0 != expected || !(p.t1 > p.t0)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "source pieces must be sorted and partition [0, 1]");
    }
    expected = p.t1;
  }
  if (expected != 1.0) {
    throw Error(ErrorCode::kInvalidParameter,
                "source pieces must be sorted and partition [0, 1]");
  }
}

SourceSpec SourceSpec::constant(const SignedDiscreteMeasure& rate) {
  return SourceSpec({SourcePiece{0.0, 1.0, rate}});
}

bool SourceSpec::is_zero() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const SourcePiece& p) { return tv_norm(p.rate) == 0.0; });
}

double SourceSpec::sup_variation() const {
  double out = 0.0;
  for (const SourcePiece& p : pieces_) out = std::max(out, tv_norm(p.rate));
  return out;
}

namespace {

double overlap(const SourcePiece& p, double s, double t) {
  return std::max(0.0, std::min(t, p.t1) - std::max(s, p.t0));
}

}  // namespace

double SourceSpec::variation(double s, double t) const {
  double out = 0.0;
  for (const SourcePiece& p : pieces_) out += overlap(p, s, t) * tv_norm(p.rate);
  return out;
}

double SourceSpec::net(double s, double t) const {
  double out = 0.0;
  for (const SourcePiece& p : pieces_) out += overlap(p, s, t) * net_mass(p.rate);
  return out;
}

DiscreteMeasure SourceSpec::positive_integral(double s, double t) const {
  DiscreteMeasure out(dim_);
  for (const SourcePiece& p : pieces_) {
    const double len = overlap(p, s, t);
    if (len > 0.0) out = out + p.rate.positive_part().scaled(len);
  }
  return out.normalized();
}

DiscreteMeasure SourceSpec::negative_integral(double s, double t) const {
  DiscreteMeasure out(dim_);
  for (const SourcePiece& p : pieces_) {
    const double len = overlap(p, s, t);
    if (len > 0.0) out = out + p.rate.negative_part().scaled(len);
  }
  return out.normalized();
}

// ---- SourcedTrajectory -----------------------------------------------------

double SourcedTrajectory::source_variation() const {
  if (!ledger.empty()) {
    double out = 0.0;
    for (const IntervalLedger& l : ledger) out += l.source_variation;
    return out;
  }
  if (source && !times.empty()) return source->variation(times.front(), times.back());
  return 0.0;
}

double SourcedTrajectory::kinetic(bool mass_weighted) const {
  double out = 0.0;
  for (const IntervalLedger& l : ledger) {
    out += mass_weighted ? l.kinetic : l.kinetic_physical;
  }
  return out;
}

double SourcedTrajectory::mass_balance_residual() const {
  double worst = 0.0;
  for (size_t i = 0; i + 1 < measures.size(); ++i) {
    double net = 0.0;
    if (i < ledger.size()) {
      net = ledger[i].source_net;
    } else if (source) {
      net = source->net(times[i], times[i + 1]);
    }
    worst = std::max(worst, std::abs(total_mass(measures[i + 1]) -
                                     total_mass(measures[i]) - net));
  }
  return worst;
}

// ---- Duhamel superposition -------------------------------------------------

namespace {

struct Birth {
  double t;
  const SignedDiscreteMeasure* rate;
  double scale;
};

// Sum over groups of coincident particles of max(net weight, 0) * value(col).
template <typename F>
double positive_group_sum(const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                          F value) {
  if ((w.array() >= 0.0).all()) {
    double out = 0.0;
    for (Index c = 0; c < X.cols(); ++c) out += w(c) * value(c);
    return out;
  }
  std::map<std::vector<double>, std::pair<double, Index>> groups;
  for (Index c = 0; c < X.cols(); ++c) {
    std::vector<double> key(X.col(c).data(), X.col(c).data() + X.rows());
    auto [it, fresh] = groups.try_emplace(std::move(key), 0.0, c);
    it->second.first += w(c);
  }
  double out = 0.0;
  for (const auto& [key, g] : groups) {
    if (g.first > 0.0) out += g.first * value(g.second);
  }
  return out;
}

SourcedTrajectory run_duhamel(const DiscreteMeasure& mu0, const VectorFieldSpec& field,
                              const SourceSpec& source, const std::vector<double>& grid,
                              int nodes) {
  std::vector<Birth> births;
  std::vector<double> events(grid.begin(), grid.end());
  for (const SourcePiece& p : source.pieces()) {
    events.push_back(p.t0);
    events.push_back(p.t1);
    if (p.rate.size() == 0) continue;
    const double h = (p.t1 - p.t0) / nodes;
    for (int j = 0; j < nodes; ++j) {
      const double s = p.t0 + (j + 0.5) * h;
      births.push_back({s, &p.rate, h});
      events.push_back(s);
    }
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  std::stable_sort(births.begin(), births.end(),
                   [](const Birth& x, const Birth& y) { return x.t < y.t; });

  const double mass0 = total_mass(mu0);
  auto mass_at = [&](double t) { return mass0 + source.net(0.0, t); };

  SourcedTrajectory traj;
  traj.times = grid;
  traj.field = field;
  traj.source = source;
  Eigen::MatrixXd X = mu0.positions();
  Eigen::VectorXd w = mu0.weights();

  auto record = [&] {
    const ClippedMeasure c = clip_negative(SignedDiscreteMeasure(X, w));
    traj.measures.push_back(c.measure);
    traj.defect = std::max(traj.defect, c.defect);
    if (c.defect > 1e-6 * std::max(total_mass(c.measure), 1e-300)) {
      traj.positivity_violation = true;
    }
  };

  size_t gi = 0, bi = 0;
  IntervalLedger current;
  double now = grid.front();
  for (double e : events) {
    if (e > now && X.cols() > 0) {
      const EnergyFlow f = integrate_with_energy(field, now, e, X);
      const double beta = (mass_at(e) - mass_at(now)) / (e - now);
      const double alpha = mass_at(now) - beta * now;
      current.kinetic_physical +=
          positive_group_sum(X, w, [&](Index c) { return f.energy(c); });
      current.kinetic += positive_group_sum(X, w, [&](Index c) {
        return alpha * f.energy(c) + beta * f.timed_energy(c);
      });
      X = f.positions;
    }
    now = e;
    while (bi < births.size() && births[bi].t <= now) {
      const SignedDiscreteMeasure& r = *births[bi].rate;
      const Index old = X.cols();
      X.conservativeResize(X.rows(), old + r.size());
      w.conservativeResize(old + r.size());
      X.rightCols(r.size()) = r.positions();
      w.tail(r.size()) = births[bi].scale * r.weights();
      ++bi;
    }
    if (gi < grid.size() && now == grid[gi]) {
      record();
      if (gi > 0) {
        current.t0 = grid[gi - 1];
        current.t1 = grid[gi];
        current.source_net = source.net(current.t0, current.t1);
        current.source_variation = source.variation(current.t0, current.t1);
        traj.ledger.push_back(current);
        current = IntervalLedger{};
      }
      ++gi;
    }
  }
  return traj;
}

}  // namespace

SourcedTrajectory solve_transport_with_source(const DiscreteMeasure& mu0,
                                              const VectorFieldSpec& field,
                                              const SourceSpec& source,
                                              const std::vector<double>& grid,
                                              const DuhamelOptions& options,
                                              DuhamelReport* report) {
  if (mu0.dim() != field.dim() || source.dim() != field.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measure, field and source live in different dimensions");
  }
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0 ||
      !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
    throw Error(ErrorCode::kInvalidParameter,
                "grid must increase strictly from 0 to 1");
  }
  if (options.min_nodes < 1 || options.max_nodes < options.min_nodes) {
    throw Error(ErrorCode::kInvalidParameter, "invalid node counts");
  }
  DuhamelReport rep;
  int n = options.min_nodes;
  SourcedTrajectory fine = run_duhamel(mu0, field, source, grid, n);
  rep.nodes_per_piece = n;
  if (source.is_zero()) {
    rep.converged = true;
    if (report) *report = rep;
    return fine;
  }
  // The midpoint rule has an h^2 error expansion, so Richardson-extrapolated
  // ledgers are compared between successive doublings.
  std::vector<IntervalLedger> raw = fine.ledger;
  double previous_total = std::numeric_limits<double>::quiet_NaN();
  rep.refinement_change = std::numeric_limits<double>::infinity();
  while (2 * n <= options.max_nodes) {
    SourcedTrajectory next = run_duhamel(mu0, field, source, grid, 2 * n);
    std::vector<IntervalLedger> extrapolated = next.ledger;
    double total = 0.0;
    for (size_t i = 0; i < extrapolated.size(); ++i) {
      extrapolated[i].kinetic = (4.0 * next.ledger[i].kinetic - raw[i].kinetic) / 3.0;
      extrapolated[i].kinetic_physical =
          (4.0 * next.ledger[i].kinetic_physical - raw[i].kinetic_physical) / 3.0;
      total += extrapolated[i].kinetic;
    }
    n *= 2;
    raw = next.ledger;
    fine = std::move(next);
    fine.ledger = std::move(extrapolated);
    rep.nodes_per_piece = n;
    if (!std::isnan(previous_total)) {
      rep.refinement_change = std::abs(total - previous_total);
      if (rep.refinement_change <= options.tolerance * std::max(1.0, std::abs(total))) {
        rep.converged = true;
        break;
      }
    }
    previous_total = total;
  }
  if (report) *report = rep;
  return fine;
}

std::vector<double> dyadic_grid(int k) {
  if (k < 0 || k > 30) throw Error(ErrorCode::kInvalidParameter, "k out of range");
  const long n = 1L << k;
  std::vector<double> out(static_cast<size_t>(n + 1));
  for (long i = 0; i <= n; ++i) out[static_cast<size_t>(i)] = std::ldexp(static_cast<double>(i), -k);
  return out;
}

// ---- action functional -----------------------------------------------------

double action_functional(const SourcedTrajectory& traj, const GenWassParams& params,
                         ActionConvention convention) {
  params.validate();
  if (params.p != 2.0) {
    throw Error(ErrorCode::kInvalidParameter, "the action functional needs p = 2");
  }
  const bool weighted = convention == ActionConvention::kMassWeighted;
  double kinetic = 0.0;
  if (!traj.ledger.empty()) {
    kinetic = traj.kinetic(weighted);
  } else if (traj.field) {
    // Interval quadrature: flow the interval's initial atoms and weight by
    // the linearly interpolated mass.
    for (size_t i = 0; i + 1 < traj.measures.size(); ++i) {
      const DiscreteMeasure& m = traj.measures[i];
      if (m.size() == 0) continue;
      const double t0 = traj.times[i], t1 = traj.times[i + 1];
      const EnergyFlow f = integrate_with_energy(*traj.field, t0, t1, m.positions());
      if (weighted) {
        const double m0 = total_mass(m), m1 = total_mass(traj.measures[i + 1]);
        const double beta = (m1 - m0) / (t1 - t0);
        const double alpha = m0 - beta * t0;
        kinetic += m.weights().dot(alpha * f.energy + beta * f.timed_energy);
      } else {
        kinetic += m.weights().dot(f.energy);
      }
    }
  } else if (traj.measures.size() > 1) {
    throw Error(ErrorCode::kUnevaluable,
                "trajectory carries no velocity information");
  }
  const double var = traj.source_variation();
  return params.a * params.a * var * var + params.b * params.b * kinetic;
}

// ---- constructive geodesic -------------------------------------------------

SourcedTrajectory constructive_geodesic(const DiscreteMeasure& mu0,
                                        const DiscreteMeasure& mu1,
                                        const GenWassParams& params, int k) {
  params.validate();
  if (params.p != 2.0) {
    throw Error(ErrorCode::kInvalidParameter, "the geodesic construction needs p = 2");
  }
  if (k < 2 || k > 30) {
    throw Error(ErrorCode::kInvalidParameter, "dyadic level must satisfy 2 <= k <= 30");
  }
  const GenWassSolution sol = generalized_distance(mu0, mu1, params);
  const double dt = std::ldexp(1.0, -k);
  const double duration = 1.0 - 2.0 * dt;
  const Eigen::VectorXd removed = (mu0.weights() - sol.tilde_mu.weights()).cwiseMax(0.0);
  const Eigen::VectorXd created = (mu1.weights() - sol.tilde_nu.weights()).cwiseMax(0.0);

  const auto& entries = sol.plan.entries();
  const Index n_legs = static_cast<Index>(entries.size());
  Eigen::MatrixXd from(mu0.dim(), n_legs), to(mu0.dim(), n_legs);
  Eigen::VectorXd mass(n_legs);
  double raw = 0.0;
  for (Index e = 0; e < n_legs; ++e) {
    const PlanEntry& pe = entries[static_cast<size_t>(e)];
    from.col(e) = mu0.position(pe.i);
    to.col(e) = mu1.position(pe.j);
    mass(e) = pe.mass;
    raw += pe.mass * (to.col(e) - from.col(e)).squaredNorm();
  }
  const double moved = mass.sum();

  SourcedTrajectory traj;
  traj.times = dyadic_grid(k);
  const size_t N = traj.times.size() - 1;
  for (size_t i = 0; i <= N; ++i) {
    const double t = traj.times[i];
    if (i == 0) {
      traj.measures.push_back(mu0);
    } else if (i == N) {
      traj.measures.push_back(mu1);
    } else if (t <= dt) {
      traj.measures.push_back(mu0.with_weights(mu0.weights() - (t / dt) * removed));
    } else if (t <= 1.0 - dt) {
      const double s = (t - dt) / duration;
      traj.measures.push_back(
          DiscreteMeasure(from + s * (to - from), mass).normalized());
    } else {
      const double f = (t - (1.0 - dt)) / dt;
      traj.measures.push_back(mu1.with_weights(sol.tilde_nu.weights() + f * created));
    }
  }
  const double per_interval = raw * dt / (duration * duration);
  for (size_t i = 0; i < N; ++i) {
    IntervalLedger l;
    l.t0 = traj.times[i];
    l.t1 = traj.times[i + 1];
    if (i == 0) {
      l.source_variation = sol.discarded[0];
      l.source_net = -sol.discarded[0];
    } else if (i == N - 1) {
      l.source_variation = sol.discarded[1];
      l.source_net = sol.discarded[1];
    } else {
      l.kinetic_physical = per_interval;
      l.kinetic = moved * per_interval;
    }
    traj.ledger.push_back(l);
  }
  return traj;
}

// ---- random feasible paths -------------------------------------------------

SourcedTrajectory random_feasible_path(const DiscreteMeasure& mu0,
                                       const DiscreteMeasure& mu1,
                                       std::mt19937_64& rng) {
  if (mu0.dim() != mu1.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measures live in different dimensions");
  }
  const int d = mu0.dim();
  std::uniform_real_distribution<double> unit;
  std::normal_distribution<double> gauss;

  // Scale of the data for waypoints and junk.
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(d, 0.0), hi = lo;
  bool any = false;
  for (const DiscreteMeasure* m : {&mu0, &mu1}) {
    for (Index i = 0; i < m->size(); ++i) {
      lo = any ? lo.cwiseMin(m->position(i)) : Eigen::VectorXd(m->position(i));
      hi = any ? hi.cwiseMax(m->position(i)) : Eigen::VectorXd(m->position(i));
      any = true;
    }
  }
  const double scale = (hi - lo).norm() + 1.0;
  auto random_point = [&] {
    Point x(d);
    for (int i = 0; i < d; ++i) x(i) = lo(i) + (hi(i) - lo(i) + 1.0) * unit(rng) - 0.5;
    return x;
  };

  const double tau1 = 0.01 + 0.29 * unit(rng);
  const double tau2 = 0.7 + 0.29 * unit(rng);
  // A third of the paths travel straight, which brings them close to optimal.
  const double detour = unit(rng) < 1.0 / 3.0 ? 0.0 : 0.3 * scale;
  const double half = 0.5 * (tau2 - tau1);

  // Phase A: partial removal.
  Eigen::VectorXd kept = mu0.weights();
  const double removal = unit(rng) < 1.0 / 3.0 ? 0.0 : 0.5;
  for (Index i = 0; i < kept.size(); ++i) {
    if (unit(rng) < removal) kept(i) *= unit(rng);
  }
  const double removed = mu0.weights().sum() - kept.sum();

  struct Leg {
    Point x, via, y;
    double g;
  };
  std::vector<Leg> legs;
  auto waypoint = [&](const Point& x, const Point& y) {
    Point w = 0.5 * (x + y);
    for (int i = 0; i < d; ++i) w(i) += detour * unit(rng) * gauss(rng);
    return w;
  };

  // Random greedy coupling of the kept mass into mu1.
  Eigen::VectorXd supply = kept, capacity = mu1.weights();
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < supply.size(); ++i) {
    for (Index j = 0; j < capacity.size(); ++j) pairs.emplace_back(i, j);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  Eigen::VectorXd arrived = Eigen::VectorXd::Zero(capacity.size());
  for (auto [i, j] : pairs) {
    double g = std::min(supply(i), capacity(j));
    if (unit(rng) < 0.5) g *= unit(rng);
    if (!(g > 0.0)) continue;
    supply(i) -= g;
    capacity(j) -= g;
    arrived(j) += g;
    const Point x = mu0.position(i), y = mu1.position(j);
    legs.push_back({x, waypoint(x, y), y, g});
  }
  // Mass that found no partner travels somewhere and is removed at the end.
  double leftover = 0.0;
  for (Index i = 0; i < supply.size(); ++i) {
    if (supply(i) <= 0.0) continue;
    const Point x = mu0.position(i), y = random_point();
    legs.push_back({x, waypoint(x, y), y, supply(i)});
    leftover += supply(i);
  }
  double junk = 0.0;
  if (unit(rng) < 0.3) {
    junk = 0.5 * unit(rng) * std::max({1.0, total_mass(mu0), total_mass(mu1)});
    if (junk > 0.0) {
      const Point x = random_point(), y = random_point();
      legs.push_back({x, waypoint(x, y), y, junk});
    }
  }
  const double created = mu1.weights().sum() - arrived.sum();
  const double carried = kept.sum() + junk;

  auto stage = [&](int which) {
    const Index n = static_cast<Index>(legs.size());
    Eigen::MatrixXd P(d, n);
    Eigen::VectorXd w(n);
    for (Index e = 0; e < n; ++e) {
      const Leg& l = legs[static_cast<size_t>(e)];
      P.col(e) = which == 0 ? l.x : which == 1 ? l.via : l.y;
      w(e) = l.g;
    }
    return n == 0 ? DiscreteMeasure(d) : DiscreteMeasure(P, w).normalized();
  };
  double first = 0.0, second = 0.0;
  for (const Leg& l : legs) {
    first += l.g * (l.via - l.x).squaredNorm() / half;
    second += l.g * (l.y - l.via).squaredNorm() / half;
  }

  SourcedTrajectory traj;
  traj.times = {0.0, tau1, tau1 + half, tau2, 1.0};
  traj.measures = {mu0, stage(0), stage(1), stage(2), mu1};
  traj.ledger = {
      {0.0, tau1, 0.0, 0.0, junk - removed, removed + junk},
      {tau1, tau1 + half, carried * first, first, 0.0, 0.0},
      {tau1 + half, tau2, carried * second, second, 0.0, 0.0},
      {tau2, 1.0, 0.0, 0.0, created - leftover - junk, created + leftover + junk},
  };
  return traj;
}

// ---- verify_gbb ------------------------------------------------------------

bool GbbReport::passed() const {
  return upper_monotone && counterexamples.empty() &&
         std::all_of(upper.begin(), upper.end(),
                     [](const GbbLevel& l) { return l.passed; });
}

GbbReport verify_gbb(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                     const GenWassParams& params, int k_max, int n_random_paths,
                     std::uint64_t seed) {
  params.validate();
  if (params.p != 2.0) {
    throw Error(ErrorCode::kInvalidParameter, "the Benamou-Brenier check needs p = 2");
  }
  GbbReport rep;
  const GenWassSolution sol = generalized_distance(mu0, mu1, params);
  rep.T = sol.T;
  rep.m_star = sol.m_star;
  for (int k = 2; k <= k_max; ++k) {
    GbbLevel level;
    level.k = k;
    level.B = action_functional(constructive_geodesic(mu0, mu1, params, k), params);
    level.bound = rep.T / (1.0 - std::ldexp(1.0, 1 - k));
    level.passed = level.B <= level.bound + 1e-9;
    if (!rep.upper.empty() &&
        level.B > rep.upper.back().B + 1e-12 * std::max(1.0, level.B)) {
      rep.upper_monotone = false;
    }
    rep.upper.push_back(level);
  }
  std::mt19937_64 rng(seed);
  rep.min_path_B = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_random_paths; ++i) {
    const double B = action_functional(random_feasible_path(mu0, mu1, rng), params);
    rep.min_path_B = std::min(rep.min_path_B, B);
    ++rep.paths;
    if (B < rep.T - 1e-6) {
      std::ostringstream os;
      os.precision(17);
      os << "path " << i << ": B = " << B << " < T = " << rep.T;
      rep.counterexamples.push_back(os.str());
    }
  }
  if (rep.paths == 0) rep.min_path_B = 0.0;
  return rep;
}

// ---- sample and hold -------------------------------------------------------

namespace {

struct BlockStep {
  DiscreteMeasure state;
  double defect = 0.0;
  IntervalLedger ledger;
};

BlockStep advance_block(const VectorFieldSpec& field, const SourceSpec& source,
                        const DiscreteMeasure& start, Index n, double dt,
                        double tau) {
  BlockStep out{start, 0.0, {}};
  const double r = dt * dt;
  const double t0 = static_cast<double>(n) * dt;
  const double t1 = static_cast<double>(n + 1) * dt;
  const DiscreteMeasure minus = source.negative_integral(t0, t1);
  const DiscreteMeasure plus = source.positive_integral(t0, t1);

  const double f_remove = std::min(tau / r, 1.0);
  if (minus.size() > 0 && f_remove > 0.0) {
    const ClippedMeasure c =
        clip_negative(SignedDiscreteMeasure(out.state) - minus.scaled(f_remove));
    out.state = c.measure;
    out.defect = c.defect;
  }
  if (tau > r && out.state.size() > 0) {
    const double frac = std::min((tau - r) / (dt - 2.0 * r), 1.0);
    const double s_end = frac >= 1.0 ? t1 : t0 + frac * dt;
    const EnergyFlow f = integrate_with_energy(field, t0, s_end, out.state.positions());
    const double speedup = dt / (dt - 2.0 * r);
    out.ledger.kinetic_physical = speedup * out.state.weights().dot(f.energy);
    out.ledger.kinetic = total_mass(out.state) * out.ledger.kinetic_physical;
    out.state = DiscreteMeasure(f.positions, out.state.weights()).normalized();
  }
  if (tau > dt - r && plus.size() > 0) {
    const double f_create = std::min((tau - (dt - r)) / r, 1.0);
    out.state = (out.state + plus.scaled(f_create)).normalized();
  }
  out.ledger.t0 = t0;
  out.ledger.t1 = t1;
  out.ledger.source_variation = total_mass(minus) + total_mass(plus);
  out.ledger.source_net = total_mass(plus) - total_mass(minus);
  return out;
}

}  // namespace

DiscreteMeasure SampleAndHold::state(Index n, double tau) const {
  if (n < 0 || n + 1 >= static_cast<Index>(trajectory.measures.size()) ||
      !(tau >= 0.0) || tau > dt) {
    throw Error(ErrorCode::kInvalidParameter, "block time out of range");
  }
  return advance_block(field, source, trajectory.measures[static_cast<size_t>(n)],
                       n, dt, tau)
      .state;
}

SampleAndHold sample_and_hold(const VectorFieldSpec& field, const SourceSpec& source,
                              const DiscreteMeasure& mu0, int k) {
  if (k < 2 || k > 20) {
    throw Error(ErrorCode::kInvalidParameter, "dyadic level must satisfy 2 <= k <= 20");
  }
  if (mu0.dim() != field.dim() || source.dim() != field.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measure, field and source live in different dimensions");
  }
  SampleAndHold s;
  s.k = k;
  s.dt = std::ldexp(1.0, -k);
  s.field = field;
  s.source = source;
  s.trajectory.times = dyadic_grid(k);
  s.trajectory.field = field;
  s.trajectory.source = source;
  s.trajectory.measures.push_back(mu0);
  const Index blocks = Index{1} << k;
  for (Index n = 0; n < blocks; ++n) {
    BlockStep b = advance_block(field, source, s.trajectory.measures.back(), n,
                                s.dt, s.dt);
    s.trajectory.defect = std::max(s.trajectory.defect, b.defect);
    if (b.defect > 1e-6 * std::max(total_mass(b.state), 1e-300)) {
      s.trajectory.positivity_violation = true;
    }
    s.trajectory.ledger.push_back(b.ledger);
    s.trajectory.measures.push_back(std::move(b.state));
  }
  return s;
}

QuasiLipschitzReport check_quasi_lipschitz(const SampleAndHold& s,
                                           const GenWassParams& params,
                                           int max_blocks) {
  QuasiLipschitzReport rep;
  const double P = s.source.sup_variation();
  const double m = total_mass(s.trajectory.measures.front()) + P;
  rep.bound = s.dt * (2.0 * params.a * P + params.b * s.field.sup_norm() * m);
  const double tol = 1e-9 + 1e-8 * m;
  const Index blocks = static_cast<Index>(s.trajectory.measures.size()) - 1;
  const Index stride = std::max<Index>(1, blocks / std::max(1, max_blocks));
  const double r = s.dt * s.dt;
  for (Index n = 0; n < blocks; n += stride) {
    const DiscreteMeasure& start = s.trajectory.measures[static_cast<size_t>(n)];
    for (double tau : {0.5 * r, r, 0.5 * s.dt, s.dt - r, s.dt - 0.5 * r, s.dt}) {
      const double W = generalized_distance(start, s.state(n, tau), params).W;
      if (rep.bound > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, W / rep.bound);
      ++rep.checks;
      if (W > rep.bound + tol) ++rep.violations;
    }
  }
  return rep;
}

SahConvergenceReport verify_sample_and_hold_convergence(
    const VectorFieldSpec& field, const SourceSpec& source,
    const DiscreteMeasure& mu0, int k_min, int k_max, const GenWassParams& params) {
  params.validate();
  if (k_min < 2 || k_max < k_min || k_max > 14) {
    throw Error(ErrorCode::kInvalidParameter,
                "levels must satisfy 2 <= k_min <= k_max <= 14");
  }
  std::vector<SampleAndHold> levels;
  for (int k = k_min; k <= k_max + 1; ++k) {
    levels.push_back(sample_and_hold(field, source, mu0, k));
  }
  DuhamelOptions ref_options;
  ref_options.min_nodes = 256;
  ref_options.max_nodes = 256;
  const DiscreteMeasure reference =
      solve_transport_with_source(mu0, field, source, {0.0, 1.0}, ref_options)
          .measures.back();

  SahConvergenceReport rep;
  const Index shared = Index{1} << k_min;
  for (int k = k_min; k <= k_max; ++k) {
    const SampleAndHold& coarse = levels[static_cast<size_t>(k - k_min)];
    const SampleAndHold& fine = levels[static_cast<size_t>(k - k_min + 1)];
    double D = 0.0;
    for (Index j = 1; j <= shared; ++j) {
      const Index ic = j << (k - k_min), jf = j << (k + 1 - k_min);
      D = std::max(D, generalized_distance(coarse.trajectory.measures[static_cast<size_t>(ic)],
                                           fine.trajectory.measures[static_cast<size_t>(jf)],
                                           params)
                          .W);
    }
    rep.k.push_back(k);
    rep.D.push_back(D);
    rep.ratio.push_back(rep.D.size() > 1 && rep.D[rep.D.size() - 2] > 0.0
                            ? D / rep.D[rep.D.size() - 2]
                            : std::numeric_limits<double>::quiet_NaN());
    rep.final_error.push_back(
        generalized_distance(coarse.trajectory.measures.back(), reference, params).W);
    if (rep.D.size() > 1) {
      const double prev = rep.D[rep.D.size() - 2];
      if (D > rep.floor && prev > rep.floor && D > rep.decay_limit * prev) {
        rep.decay_ok = false;
      }
      if (prev <= rep.floor && D > rep.floor) rep.decay_ok = false;
    }
  }
  rep.final_ok = rep.final_error.back() <= rep.final_error.front() + 1e-9;
  // Quasi-Lipschitz bound on the coarser levels, where every block is cheap.
  for (int k = k_min; k <= std::min(k_max, 6); ++k) {
    const QuasiLipschitzReport q =
        check_quasi_lipschitz(levels[static_cast<size_t>(k - k_min)], params);
    rep.quasi_lipschitz.checks += q.checks;
    rep.quasi_lipschitz.violations += q.violations;
    rep.quasi_lipschitz.bound = q.bound;
    rep.quasi_lipschitz.worst_ratio =
        std::max(rep.quasi_lipschitz.worst_ratio, q.worst_ratio);
  }
  return rep;
}

}  // namespace genwass
