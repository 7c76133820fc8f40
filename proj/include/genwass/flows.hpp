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
// Time-dependent vector fields with analytically known constants and their
// flow maps.
//
// Every field carries a window radius R. The declared Lipschitz constant L
// holds on all of R^d; the declared sup-norm M holds on the ball |x| <= R
// for t in [0, 1].

#ifndef GENWASS_FLOWS_HPP_
#define GENWASS_FLOWS_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "genwass/genwass.hpp"
#include "genwass/measures.hpp"

namespace genwass {

struct ConstantField {
  Point c;
};

struct AffineField {
  Eigen::MatrixXd A;
  Point c;
};

// Two-dimensional rotation v(x, y) = omega (-y, x).
struct RotationField {
  double omega = 1.0;
};

// v(x) = -A (x - c) / sigma^2 exp(-|x - c|^2 / (2 sigma^2)).
struct GaussianGradientField {
  double amplitude = 1.0;
  double width = 1.0;
  Point center;
};

// g(t) = offset + amplitude sin(frequency t).
struct TimeScaling {
  double offset = 1.0;
  double amplitude = 0.0;
  double frequency = 0.0;

  double operator()(double t) const;
  double bound() const { return std::abs(offset) + std::abs(amplitude); }
};

class VectorFieldSpec {
 public:
  using Base =
      std::variant<ConstantField, AffineField, RotationField, GaussianGradientField>;

  VectorFieldSpec();  // zero field on R^1
  VectorFieldSpec(Base base, double window_radius,
                  std::optional<TimeScaling> scaling = std::nullopt);

  static VectorFieldSpec zero(int dim);
  static VectorFieldSpec constant(Point c, double window_radius = 1.0);
  static VectorFieldSpec affine(Eigen::MatrixXd A, Point c, double window_radius);
  static VectorFieldSpec rotation(double omega, double window_radius);
  static VectorFieldSpec gaussian_gradient(double amplitude, double width,
                                           Point center);

  VectorFieldSpec time_scaled(TimeScaling g) const;
  // Replaces the declared constants (e.g. from a JSON document).
  VectorFieldSpec with_constants(std::optional<double> L,
                                 std::optional<double> M) const;

  Point operator()(double t, const Eigen::Ref<const Point>& x) const;
  // Column-wise evaluation.
  Eigen::MatrixXd apply(double t, const Eigen::MatrixXd& X) const;

  int dim() const { return dim_; }
  double lipschitz() const { return L_; }
  double sup_norm() const { return M_; }
  double window_radius() const { return radius_; }
  // "constant", "affine", "rotation", "gaussian_gradient".
  std::string kind() const;
  const Base& base() const { return base_; }
  const std::optional<TimeScaling>& scaling() const { return scaling_; }

 private:
  Base base_;
  std::optional<TimeScaling> scaling_;
  double radius_ = 1.0;
  int dim_ = 1;
  double L_ = 0.0;
  double M_ = 0.0;
};

struct FieldSpotCheck {
  double max_quotient = 0.0;  // sampled Lipschitz quotient
  double max_norm = 0.0;      // sampled |v| on the window
  int samples = 0;
  bool lipschitz_ok = true;
  bool sup_norm_ok = true;
  bool passed() const { return lipschitz_ok && sup_norm_ok; }
};

// Samples the window and t in [0, 1]; accepts up to a 1e-6 relative excess.
FieldSpotCheck spot_check(const VectorFieldSpec& field, std::uint64_t seed,
                          int samples = 10000);

struct FlowOptions {
  double tolerance = 1e-10;  // relative gap between successive step doublings
  double initial_step = 1.0 / 32.0;
  long max_steps = 1L << 22;
};

// phi_{[t0, t1]}(x) by RK4 with global step doubling. t1 < t0 integrates
// backwards. Throws kIntegrationFailure when the step budget runs out.
Point integrate_flow(const VectorFieldSpec& field, double t0, double t1,
                     const Eigen::Ref<const Point>& x,
                     const FlowOptions& options = {});

// Columns are independent points.
Eigen::MatrixXd integrate_points(const VectorFieldSpec& field, double t0,
                                 double t1, const Eigen::MatrixXd& X,
                                 const FlowOptions& options = {});

// Flow of the points together with the energies int |v|^2 dt and
// int t |v|^2 dt along each path.
struct EnergyFlow {
  Eigen::MatrixXd positions;
  Eigen::VectorXd energy;        // int_{t0}^{t1} |v|^2 dt
  Eigen::VectorXd timed_energy;  // int_{t0}^{t1} t |v|^2 dt
};
EnergyFlow integrate_with_energy(const VectorFieldSpec& field, double t0,
                                 double t1, const Eigen::MatrixXd& X,
                                 const FlowOptions& options = {});

// phi_{[t0, t1]} # mu.
DiscreteMeasure flow_push(const VectorFieldSpec& field, double t0, double t1,
                          const DiscreteMeasure& mu,
                          const FlowOptions& options = {});

// (e^{Lt} - 1) / L, equal to t in the limit L -> 0.
double growth_factor(double L, double t);

struct FlowEstimate {
  int index = 0;  // 1..6
  std::string description;
  bool applicable = true;  // (1) and (3) need equal masses
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool passed = true;
};

struct FlowEstimateReport {
  std::vector<FlowEstimate> estimates;
  double allowance = 0.0;
  double sup_difference = 0.0;  // sampled sup |v - w|
  double worst_slack = 0.0;
  bool passed() const;
};

// Checks the six estimates for the flows phi of v and psi of w at time t.
FlowEstimateReport verify_flow_estimates(const VectorFieldSpec& v,
                                         const VectorFieldSpec& w,
                                         const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu, double t,
                                         const GenWassParams& params,
                                         std::uint64_t seed = 1);

}  // namespace genwass

#endif  // GENWASS_FLOWS_HPP_
