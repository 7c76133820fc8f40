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

#include "genwass/flows.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "genwass/error.hpp"
#include "genwass/exact_ot.hpp"

namespace genwass {

double TimeScaling::operator()(double t) const {
  return offset + amplitude * std::sin(frequency * t);
}

namespace {

struct Constants {
  int dim;
  double L;
  double M;
};

Constants base_constants(const VectorFieldSpec::Base& base, double R) {
  struct Visitor {
    double R;
    Constants operator()(const ConstantField& f) const {
      return {static_cast<int>(f.c.size()), 0.0, f.c.norm()};
    }
    Constants operator()(const AffineField& f) const {
      const double norm2 =
          f.A.size() == 0 ? 0.0
                          : Eigen::JacobiSVD<Eigen::MatrixXd>(f.A).singularValues()(0);
      return {static_cast<int>(f.c.size()), norm2, norm2 * R + f.c.norm()};
    }
    Constants operator()(const RotationField& f) const {
      return {2, std::abs(f.omega), std::abs(f.omega) * R};
    }
    Constants operator()(const GaussianGradientField& f) const {
      const double A = std::abs(f.amplitude), s = f.width;
      return {static_cast<int>(f.center.size()), A / (s * s),
              A / s * std::exp(-0.5)};
    }
  };
  return std::visit(Visitor{R}, base);
}

void validate_base(const VectorFieldSpec::Base& base) {
  if (const auto* f = std::get_if<AffineField>(&base)) {
    if (f->A.rows() != f->A.cols() || f->A.rows() != f->c.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "affine field needs a square matrix matching the offset");
    }
    if (!f->A.allFinite() || !f->c.allFinite()) {
      throw Error(ErrorCode::kNonFinite, "affine field has non-finite entries");
    }
  } else if (const auto* f = std::get_if<ConstantField>(&base)) {
    if (f->c.size() == 0) {
      throw Error(ErrorCode::kDimensionMismatch, "constant field needs dim >= 1");
    }
    if (!f->c.allFinite()) {
      throw Error(ErrorCode::kNonFinite, "constant field is not finite");
    }
  } else if (const auto* f = std::get_if<RotationField>(&base)) {
    if (!std::isfinite(f->omega)) {
      throw Error(ErrorCode::kNonFinite, "rotation rate is not finite");
    }
  } else if (const auto* f = std::get_if<GaussianGradientField>(&base)) {
    if (!(f->width > 0.0) || !std::isfinite(f->width) ||
        !std::isfinite(f->amplitude)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "gaussian field needs a finite amplitude and width > 0");
    }
    if (f->center.size() == 0 || !f->center.allFinite()) {
      throw Error(ErrorCode::kDimensionMismatch, "gaussian field needs a center");
    }
  }
}

}  // namespace

VectorFieldSpec::VectorFieldSpec() : VectorFieldSpec(ConstantField{Point::Zero(1)}, 1.0) {}

VectorFieldSpec::VectorFieldSpec(Base base, double window_radius,
                                 std::optional<TimeScaling> scaling)
    : base_(std::move(base)), scaling_(scaling), radius_(window_radius) {
  if (!(window_radius > 0.0) || !std::isfinite(window_radius)) {
    throw Error(ErrorCode::kInvalidParameter, "window radius must be > 0");
  }
  validate_base(base_);
  const Constants k = base_constants(base_, radius_);
  dim_ = k.dim;
  const double g = scaling_ ? scaling_->bound() : 1.0;
  L_ = g * k.L;
  M_ = g * k.M;
}

VectorFieldSpec VectorFieldSpec::zero(int dim) {
  return VectorFieldSpec(ConstantField{Point::Zero(dim)}, 1.0);
}

VectorFieldSpec VectorFieldSpec::constant(Point c, double window_radius) {
  return VectorFieldSpec(ConstantField{std::move(c)}, window_radius);
}

VectorFieldSpec VectorFieldSpec::affine(Eigen::MatrixXd A, Point c,
                                        double window_radius) {
  return VectorFieldSpec(AffineField{std::move(A), std::move(c)}, window_radius);
}

VectorFieldSpec VectorFieldSpec::rotation(double omega, double window_radius) {
  return VectorFieldSpec(RotationField{omega}, window_radius);
}

VectorFieldSpec VectorFieldSpec::gaussian_gradient(double amplitude, double width,
                                                   Point center) {
  const double R = center.norm() + 4.0 * width;
  return VectorFieldSpec(GaussianGradientField{amplitude, width, std::move(center)}, R);
}

VectorFieldSpec VectorFieldSpec::time_scaled(TimeScaling g) const {
  if (scaling_) {
    throw Error(ErrorCode::kInvalidParameter, "field is already time-scaled");
  }
  return VectorFieldSpec(base_, radius_, g);
}

VectorFieldSpec VectorFieldSpec::with_constants(std::optional<double> L,
                                                std::optional<double> M) const {
  VectorFieldSpec out = *this;
  if (L) {
    if (!(*L >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "L must be >= 0");
    out.L_ = *L;
  }
  if (M) {
    if (!(*M >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "M must be >= 0");
    out.M_ = *M;
  }
  return out;
}

std::string VectorFieldSpec::kind() const {
  switch (base_.index()) {
    case 0: return "constant";
    case 1: return "affine";
    case 2: return "rotation";
    default: return "gaussian_gradient";
  }
}

Point VectorFieldSpec::operator()(double t, const Eigen::Ref<const Point>& x) const {
  Point v;
  if (const auto* f = std::get_if<ConstantField>(&base_)) {
    v = f->c;
  } else if (const auto* f = std::get_if<AffineField>(&base_)) {
    v = f->A * x + f->c;
  } else if (const auto* f = std::get_if<RotationField>(&base_)) {
    v = Point(2);
    v << -f->omega * x(1), f->omega * x(0);
  } else {
    const auto& g = std::get<GaussianGradientField>(base_);
    const Point r = x - g.center;
    const double s2 = g.width * g.width;
    v = (-g.amplitude / s2 * std::exp(-0.5 * r.squaredNorm() / s2)) * r;
  }
  if (scaling_) v *= (*scaling_)(t);
  return v;
}

Eigen::MatrixXd VectorFieldSpec::apply(double t, const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd V(X.rows(), X.cols());
  if (const auto* f = std::get_if<ConstantField>(&base_)) {
    V = f->c.replicate(1, X.cols());
  } else if (const auto* f = std::get_if<AffineField>(&base_)) {
    V.noalias() = f->A * X;
    V.colwise() += f->c;
  } else if (const auto* f = std::get_if<RotationField>(&base_)) {
    V.row(0) = -f->omega * X.row(1);
    V.row(1) = f->omega * X.row(0);
  } else {
    for (Index c = 0; c < X.cols(); ++c) V.col(c) = (*this)(t, X.col(c));
    return V;
  }
  if (scaling_) V *= (*scaling_)(t);
  return V;
}

// ---- spot checks -----------------------------------------------------------

FieldSpotCheck spot_check(const VectorFieldSpec& field, std::uint64_t seed,
                          int samples) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  const int d = field.dim();
  const double R = field.window_radius();
  auto in_ball = [&] {
    Point u(d);
    for (int i = 0; i < d; ++i) u(i) = gauss(rng);
    return Point(u.normalized() * (R * std::pow(unit(rng), 1.0 / d)));
  };
  FieldSpotCheck out;
  for (int s = 0; s < samples; ++s) {
    const double t = unit(rng);
    const Point x = in_ball();
    Point dir(d);
    for (int i = 0; i < d; ++i) dir(i) = gauss(rng);
    const double delta = R * std::pow(10.0, -4.0 * unit(rng));
    const Point y = x + delta * dir.normalized();
    const Point vx = field(t, x);
    out.max_norm = std::max(out.max_norm, vx.norm());
    out.max_quotient =
        std::max(out.max_quotient, (vx - field(t, y)).norm() / (x - y).norm());
  }
  out.samples = samples;
  out.lipschitz_ok = out.max_quotient <= field.lipschitz() * (1.0 + 1e-6) + 1e-12;
  out.sup_norm_ok = out.max_norm <= field.sup_norm() * (1.0 + 1e-6) + 1e-12;
  return out;
}

// ---- integration -----------------------------------------------------------

namespace {

// Fixed-step RK4 on the state (x, e0, e1) with e0' = |v|^2, e1' = t |v|^2,
// all columns advanced together.
Eigen::MatrixXd rk4(const VectorFieldSpec& field, double t0, double t1,
                    const Eigen::MatrixXd& X, long steps, bool energy) {
  const Index d = X.rows();
  const Index rows = energy ? d + 2 : d;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(rows, X.cols());
  S.topRows(d) = X;
  const double h = (t1 - t0) / static_cast<double>(steps);
  Eigen::MatrixXd k1(rows, X.cols()), k2(rows, X.cols()), k3(rows, X.cols()),
      k4(rows, X.cols()), tmp(rows, X.cols());
  auto rhs = [&](double t, const Eigen::MatrixXd& s, Eigen::MatrixXd& out) {
    out.topRows(d) = field.apply(t, s.topRows(d));
    if (energy) {
      out.row(d) = out.topRows(d).colwise().squaredNorm();
      out.row(d + 1) = t * out.row(d);
    }
  };
  for (long n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * h;
    rhs(t, S, k1);
    tmp = S + (0.5 * h) * k1;
    rhs(t + 0.5 * h, tmp, k2);
    tmp = S + (0.5 * h) * k2;
    rhs(t + 0.5 * h, tmp, k3);
    tmp = S + h * k3;
    rhs(t + h, tmp, k4);
    S += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return S;
}

Eigen::MatrixXd integrate_state(const VectorFieldSpec& field, double t0,
                                double t1, const Eigen::MatrixXd& X,
                                const FlowOptions& opt, bool energy) {
  if (X.rows() != field.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "points and field live in different dimensions");
  }
  if (!std::isfinite(t0) || !std::isfinite(t1)) {
    throw Error(ErrorCode::kNonFinite, "non-finite integration interval");
  }
  if (t0 == t1 || X.cols() == 0) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(energy ? X.rows() + 2 : X.rows(), X.cols());
    S.topRows(X.rows()) = X;
    return S;
  }
  // Fields with zero Lipschitz constant and no time scaling are constant in
  // space and time, so one step is exact.
  const bool constant_field =
      std::holds_alternative<ConstantField>(field.base()) && !field.scaling();
  long steps = constant_field
                   ? 1
                   : std::max(1L, static_cast<long>(std::ceil(std::abs(t1 - t0) /
                                                              opt.initial_step)));
  Eigen::MatrixXd coarse = rk4(field, t0, t1, X, steps, energy);
  if (constant_field) return coarse;
  while (true) {
    steps *= 2;
    if (steps > opt.max_steps) {
      throw Error(ErrorCode::kIntegrationFailure,
                  "flow integration did not converge within the step budget");
    }
    Eigen::MatrixXd fine = rk4(field, t0, t1, X, steps, energy);
    if (!fine.allFinite()) {
      throw Error(ErrorCode::kIntegrationFailure, "flow integration diverged");
    }
    bool converged = true;
    for (Index c = 0; c < X.cols() && converged; ++c) {
      const double gap = (fine.col(c) - coarse.col(c)).lpNorm<Eigen::Infinity>();
      converged = gap <= opt.tolerance * std::max(1.0, fine.col(c).lpNorm<Eigen::Infinity>());
    }
    if (converged) return fine;
    coarse = std::move(fine);
  }
}

}  // namespace

Point integrate_flow(const VectorFieldSpec& field, double t0, double t1,
                     const Eigen::Ref<const Point>& x, const FlowOptions& options) {
  Eigen::MatrixXd X = x;
  return integrate_state(field, t0, t1, X, options, false).col(0);
}

Eigen::MatrixXd integrate_points(const VectorFieldSpec& field, double t0,
                                 double t1, const Eigen::MatrixXd& X,
                                 const FlowOptions& options) {
  return integrate_state(field, t0, t1, X, options, false);
}

EnergyFlow integrate_with_energy(const VectorFieldSpec& field, double t0,
                                 double t1, const Eigen::MatrixXd& X,
                                 const FlowOptions& options) {
  const Eigen::MatrixXd S = integrate_state(field, t0, t1, X, options, true);
  const Index d = X.rows();
  return {S.topRows(d), S.row(d).transpose(), S.row(d + 1).transpose()};
}

DiscreteMeasure flow_push(const VectorFieldSpec& field, double t0, double t1,
                          const DiscreteMeasure& mu, const FlowOptions& options) {
  if (mu.size() == 0) {
    if (mu.dim() != field.dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "measure and field live in different dimensions");
    }
    return mu;
  }
  return DiscreteMeasure(integrate_points(field, t0, t1, mu.positions(), options),
                         mu.weights());
}

double growth_factor(double L, double t) {
  if (std::abs(L * t) < 1e-8) return t * (1.0 + 0.5 * L * t);
  return std::expm1(L * t) / L;
}

// ---- estimates -------------------------------------------------------------

bool FlowEstimateReport::passed() const {
  return std::all_of(estimates.begin(), estimates.end(),
                     [](const FlowEstimate& e) { return e.passed; });
}

namespace {

// Positions of the atoms along the flow at `count` + 1 equispaced times.
std::vector<Eigen::MatrixXd> sample_path(const VectorFieldSpec& f, double t,
                                         const Eigen::MatrixXd& X, int count) {
  std::vector<Eigen::MatrixXd> out{X};
  for (int i = 0; i < count; ++i) {
    out.push_back(integrate_points(f, t * i / count, t * (i + 1) / count, out.back()));
  }
  return out;
}

}  // namespace

FlowEstimateReport verify_flow_estimates(const VectorFieldSpec& v,
                                         const VectorFieldSpec& w,
                                         const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu, double t,
                                         const GenWassParams& params,
                                         std::uint64_t seed) {
  params.validate();
  if (v.dim() != w.dim() || v.dim() != mu.dim() || mu.dim() != nu.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "fields and measures live in different dimensions");
  }
  if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "t must be >= 0");
  const double p = params.p;
  const double mass_mu = total_mass(mu), mass_nu = total_mass(nu);
  const bool equal_mass =
      std::abs(mass_mu - mass_nu) <= kEqualMassTol * std::max(1.0, mass_mu);

  FlowEstimateReport rep;
  const double R = std::max(v.window_radius(), w.window_radius());
  rep.allowance = 1e-8 * (mass_mu + mass_nu) * std::max(1.0, R);

  // sup over the window and along both flows of |v_tau - w_tau|.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit;
  std::normal_distribution<double> gauss;
  const int d = v.dim();
  double sup = 0.0;
  for (int s = 0; s < 4000; ++s) {
    Point u(d);
    for (int i = 0; i < d; ++i) u(i) = gauss(rng);
    const Point x = u.normalized() * (R * std::pow(unit(rng), 1.0 / d));
    const double tau = t * unit(rng);
    sup = std::max(sup, (v(tau, x) - w(tau, x)).norm());
  }
  const int count = 64;
  for (const DiscreteMeasure* m : {&mu, &nu}) {
    if (m->size() == 0) continue;
    for (const VectorFieldSpec* f : {&v, &w}) {
      const auto path = sample_path(*f, t, m->positions(), count);
      for (int i = 0; i <= count; ++i) {
        const double tau = t * i / count;
        for (Index c = 0; c < path[i].cols(); ++c) {
          sup = std::max(sup, (v(tau, path[i].col(c)) - w(tau, path[i].col(c))).norm());
        }
      }
    }
  }
  rep.sup_difference = sup;

  const DiscreteMeasure phi_mu = flow_push(v, 0.0, t, mu);
  const DiscreteMeasure phi_nu = flow_push(v, 0.0, t, nu);
  const DiscreteMeasure psi_nu = flow_push(w, 0.0, t, nu);
  const double Lv = v.lipschitz();
  const double L = std::max(v.lipschitz(), w.lipschitz());
  const double grow_v = std::exp(Lv * t);
  const double grow = std::exp(L * t);
  auto Wp = [&](const DiscreteMeasure& x, const DiscreteMeasure& y) {
    return wasserstein(x, y, p).distance;
  };
  auto Wab = [&](const DiscreteMeasure& x, const DiscreteMeasure& y) {
    return generalized_distance(x, y, params).W;
  };

  auto add = [&](int index, const char* text, bool applicable, auto lhs, auto rhs) {
    FlowEstimate e;
    e.index = index;
    e.description = text;
    e.applicable = applicable;
    if (applicable) {
      e.lhs = lhs();
      e.rhs = rhs();
      e.slack = e.rhs - e.lhs;
      e.passed = e.slack >= -(1e-6 + rep.allowance);
    }
    rep.estimates.push_back(e);
  };
  add(1, "W_p(phi mu, phi nu) <= e^{Lt} W_p(mu, nu)", equal_mass,
      [&] { return Wp(phi_mu, phi_nu); }, [&] { return grow_v * Wp(mu, nu); });
  add(2, "W_p(mu, phi mu) <= t M |mu|", true,
      [&] { return Wp(mu, phi_mu); }, [&] { return t * v.sup_norm() * mass_mu; });
  add(3, "W_p(phi mu, psi nu) <= e^{Lt} W_p(mu, nu) + (e^{Lt}-1)/L |mu| sup|v-w|",
      equal_mass, [&] { return Wp(phi_mu, psi_nu); },
      [&] { return grow * Wp(mu, nu) + growth_factor(L, t) * mass_mu * sup; });
  add(4, "W(phi mu, phi nu) <= e^{Lt} W(mu, nu)", true,
      [&] { return Wab(phi_mu, phi_nu); }, [&] { return grow_v * Wab(mu, nu); });
  add(5, "W(mu, phi mu) <= b t M |mu|", true,
      [&] { return Wab(mu, phi_mu); },
      [&] { return params.b * t * v.sup_norm() * mass_mu; });
  add(6, "W(phi mu, psi nu) <= e^{Lt} W(mu, nu) + b (e^{Lt}-1)/L |mu| sup|v-w|",
      true, [&] { return Wab(phi_mu, psi_nu); },
      [&] {
        return grow * Wab(mu, nu) + params.b * growth_factor(L, t) * mass_mu * sup;
      });
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (const FlowEstimate& e : rep.estimates) {
    if (e.applicable) rep.worst_slack = std::min(rep.worst_slack, e.slack);
  }
  return rep;
}

}  // namespace genwass
