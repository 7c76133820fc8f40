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
// Transport with source
//
//   d/dt mu_t + div(v_t mu_t) = h_t
//
// and the action functional
//
//   B(mu, v, h) = a^2 (int_0^1 |h_t| dt)^2 + b^2 int_0^1 K_t dt.
//
// With the mass convention of exact_ot.hpp, W_2^2 of two measures of mass m
// is m times the optimal raw cost, so the kinetic term that matches it is
// K_t = |mu_t| int |v_t|^2 dmu_t (kMassWeighted, the default). The
// unweighted K_t = int |v_t|^2 dmu_t is available as kPhysical; the two
// coincide for unit mass.

#ifndef GENWASS_DYNAMICS_HPP_
#define GENWASS_DYNAMICS_HPP_

#include <cstdint>
#include <random>
#include <optional>
#include <string>
#include <vector>

#include "genwass/flows.hpp"
#include "genwass/genwass.hpp"
#include "genwass/measures.hpp"

namespace genwass {

// h_t = rate on [t0, t1).
struct SourcePiece {
  double t0 = 0.0;
  double t1 = 1.0;
  SignedDiscreteMeasure rate;
};

class SourceSpec {
 public:
  // Zero source on R^dim.
  explicit SourceSpec(int dim = 1);
  // Pieces must be sorted and partition [0, 1]. Throws kSchemaViolation or
  // kInvalidParameter otherwise.
  explicit SourceSpec(std::vector<SourcePiece> pieces);

  static SourceSpec constant(const SignedDiscreteMeasure& rate);

  int dim() const { return dim_; }
  const std::vector<SourcePiece>& pieces() const { return pieces_; }
  bool is_zero() const;

  // sup_t |h_t|.
  double sup_variation() const;
  // int_s^t |h_tau| dtau.
  double variation(double s, double t) const;
  // int_s^t of the net mass rate.
  double net(double s, double t) const;
  // int_s^t h^+ and int_s^t h^-.
  DiscreteMeasure positive_integral(double s, double t) const;
  DiscreteMeasure negative_integral(double s, double t) const;

 private:
  std::vector<SourcePiece> pieces_;
  int dim_ = 1;
};

// Bookkeeping for one grid interval [t0, t1].
struct IntervalLedger {
  double t0 = 0.0;
  double t1 = 0.0;
  double kinetic = 0.0;           // int |mu_t| int |v|^2 dmu_t dt
  double kinetic_physical = 0.0;  // int int |v|^2 dmu_t dt
  double source_net = 0.0;        // int net mass of h
  double source_variation = 0.0;  // int |h|
};

struct SourcedTrajectory {
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;
  std::optional<VectorFieldSpec> field;
  std::optional<SourceSpec> source;
  // One entry per grid interval; empty when no kinetic bookkeeping exists.
  std::vector<IntervalLedger> ledger;
  double defect = 0.0;  // mass removed by positivity clipping
  bool positivity_violation = false;

  double source_variation() const;
  double kinetic(bool mass_weighted = true) const;
  // max_i | |mu_{i+1}| - |mu_i| - net source |.
  double mass_balance_residual() const;
};

enum class ActionConvention { kMassWeighted, kPhysical };

struct DuhamelOptions {
  int min_nodes = 64;     // midpoint nodes per source piece
  int max_nodes = 1024;
  double tolerance = 1e-8;  // relative change of the kinetic functional
};

struct DuhamelReport {
  int nodes_per_piece = 0;
  double refinement_change = 0.0;
  bool converged = false;
};

// mu_t = phi_{[0,t]} # mu0 + int_0^t phi_{[s,t]} # h_s ds on the given grid
// (which must start at 0 and end at 1). The source integral uses the
// midpoint rule per piece, doubling the nodes until the kinetic functional
// settles. Negative net weight is clipped and reported as a defect.
SourcedTrajectory solve_transport_with_source(
    const DiscreteMeasure& mu0, const VectorFieldSpec& field,
    const SourceSpec& source, const std::vector<double>& grid,
    const DuhamelOptions& options = {}, DuhamelReport* report = nullptr);

// Uniform grid with 2^k intervals.
std::vector<double> dyadic_grid(int k);

// Requires p = 2. Throws kUnevaluable when the trajectory carries neither a
// ledger nor a field.
double action_functional(const SourcedTrajectory& traj,
                         const GenWassParams& params,
                         ActionConvention convention = ActionConvention::kMassWeighted);

// Remove mu0 - mu0~ on [0, dt], move along straight lines per plan entry on
// [dt, 1 - dt], create mu1 - mu1~ on [1 - dt, 1], with dt = 2^-k, k >= 2.
// The grid is dyadic of level k.
SourcedTrajectory constructive_geodesic(const DiscreteMeasure& mu0,
                                        const DiscreteMeasure& mu1,
                                        const GenWassParams& params, int k);

// A feasible path from mu0 to mu1: random partial removal, optional junk
// mass, straight legs through a waypoint for a random coupling, then the
// remaining removal and creation.
SourcedTrajectory random_feasible_path(const DiscreteMeasure& mu0,
                                       const DiscreteMeasure& mu1,
                                       std::mt19937_64& rng);

struct GbbLevel {
  int k = 0;
  double B = 0.0;
  double bound = 0.0;  // (1 - 2^{1-k})^{-1} T
  bool passed = true;
};

struct GbbReport {
  double T = 0.0;
  double m_star = 0.0;
  std::vector<GbbLevel> upper;
  bool upper_monotone = true;
  int paths = 0;
  double min_path_B = 0.0;
  std::vector<std::string> counterexamples;
  bool passed() const;
};

GbbReport verify_gbb(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                     const GenWassParams& params, int k_max, int n_random_paths,
                     std::uint64_t seed = 1);

struct SampleAndHold {
  int k = 0;
  double dt = 0.0;
  VectorFieldSpec field;
  SourceSpec source;
  // mu at n dt, n = 0..2^k; trajectory.measures holds the same states.
  SourcedTrajectory trajectory;

  // State at n dt + tau for tau in [0, dt].
  DiscreteMeasure state(Index n, double tau) const;
};

// Block n = [n dt, (n+1) dt]: remove int h^- over the first dt^2, flow with
// v over the middle part (time rescaled so that the block's flow map is
// phi_{[n dt, (n+1) dt]}), create int h^+ over the last dt^2.
SampleAndHold sample_and_hold(const VectorFieldSpec& field,
                              const SourceSpec& source,
                              const DiscreteMeasure& mu0, int k);

struct QuasiLipschitzReport {
  int checks = 0;
  int violations = 0;
  double bound = 0.0;        // dt (2 a P + b M m) at the last level checked
  double worst_ratio = 0.0;  // largest W / bound
  bool passed() const { return violations == 0; }
};

// W(mu_{n dt}, mu_{n dt + tau}) <= dt (2 a P + b M m), m = |mu0| + P, on up
// to `max_blocks` evenly spread blocks.
QuasiLipschitzReport check_quasi_lipschitz(const SampleAndHold& s,
                                           const GenWassParams& params,
                                           int max_blocks = 16);

struct SahConvergenceReport {
  std::vector<int> k;
  std::vector<double> D;            // D_k
  std::vector<double> ratio;        // D_k / D_{k-1}, NaN for the first level
  std::vector<double> final_error;  // W(mu^k_1, Duhamel reference at 1)
  QuasiLipschitzReport quasi_lipschitz;
  double decay_limit = 0.75;
  double floor = 1e-7;  // D below this counts as converged
  bool decay_ok = true;
  bool final_ok = true;
  bool passed() const { return decay_ok && final_ok && quasi_lipschitz.passed(); }
};

// D_k = max over the level-k_min block ends of W(mu^k_t, mu^{k+1}_t) for
// k = k_min..k_max; requires k_min >= 2.
SahConvergenceReport verify_sample_and_hold_convergence(
    const VectorFieldSpec& field, const SourceSpec& source,
    const DiscreteMeasure& mu0, int k_min, int k_max,
    const GenWassParams& params);

}  // namespace genwass

#endif  // GENWASS_DYNAMICS_HPP_
