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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "genwass/error.hpp"
#include "genwass/exact_ot.hpp"
#include "genwass/flows.hpp"
#include "genwass/random.hpp"

using namespace genwass;

namespace {

DiscreteMeasure rand_measure(std::mt19937_64& rng, int max_atoms, double box = 1.0) {
  RandomMeasureOptions o;
  o.dim = 2;
  o.max_atoms = max_atoms;
  o.min_mass = 0.2;
  o.box = box;
  return random_measure(rng, o);
}

std::vector<VectorFieldSpec> fields() {
  Eigen::Matrix2d A;
  A << 0.2, 0.5, -0.4, 0.1;
  return {VectorFieldSpec::constant(Eigen::Vector2d(0.6, -0.3), 3),
          VectorFieldSpec::affine(A, Eigen::Vector2d(0.1, 0.2), 3),
          VectorFieldSpec::rotation(1.0, 1.5),
          VectorFieldSpec::gaussian_gradient(1.0, 0.7, Eigen::Vector2d(0.3, -0.2)),
          VectorFieldSpec::rotation(1.0, 1.5).time_scaled({1.0, 0.5, 3.0})};
}

}  // namespace

TEST_CASE("constant field is integrated exactly") {
  const auto f = VectorFieldSpec::constant(Eigen::Vector2d(0.6, -0.3));
  const Eigen::Vector2d x(1, 2);
  const Point y = integrate_flow(f, 0.25, 2.25, x);
  CHECK((y - (x + 2.0 * Eigen::Vector2d(0.6, -0.3))).norm() <= 1e-12);
}

TEST_CASE("rotation returns after one period") {
  for (double omega : {1.0, 2.5}) {
    const auto f = VectorFieldSpec::rotation(omega, 2.0);
    const Eigen::Vector2d x(1.2, -0.4);
    const Point y = integrate_flow(f, 0.0, 2 * std::numbers::pi / omega, x);
    CHECK((y - x).norm() <= 1e-8);
  }
}

TEST_CASE("identity affine field grows exponentially") {
  const auto f = VectorFieldSpec::affine(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 10);
  const Eigen::Vector2d x(0.3, -0.7);
  const Point y = integrate_flow(f, 0.0, 1.5, x);
  CHECK((y - x * std::exp(1.5)).norm() <= 1e-8);
}

TEST_CASE("semigroup and reversibility") {
  const Eigen::Vector2d x(0.4, 0.9);
  for (const auto& f : fields()) {
    const Point direct = integrate_flow(f, 0.0, 1.0, x);
    const Point split = integrate_flow(f, 0.3, 1.0, integrate_flow(f, 0.0, 0.3, x));
    CHECK((direct - split).norm() <= 1e-8);
    const Point back = integrate_flow(f, 1.0, 0.0, direct);
    CHECK((back - x).norm() <= 1e-6);
  }
}

TEST_CASE("batched and single-point integration agree") {
  std::mt19937_64 rng(97);
  const auto mu = rand_measure(rng, 12);
  for (const auto& f : fields()) {
    const Eigen::MatrixXd Y = integrate_points(f, 0.0, 0.7, mu.positions());
    for (Index i = 0; i < mu.size(); ++i) {
      CHECK((Y.col(i) - integrate_flow(f, 0.0, 0.7, mu.position(i))).norm() <= 1e-8);
    }
  }
}

TEST_CASE("energy along a constant field") {
  const auto f = VectorFieldSpec::constant(Eigen::Vector2d(3, 4));
  const auto e = integrate_with_energy(f, 0.0, 2.0, Eigen::MatrixXd::Zero(2, 3));
  CHECK(e.energy(1) == doctest::Approx(50.0));
  CHECK(e.timed_energy(2) == doctest::Approx(50.0));
}

TEST_CASE("flow push preserves mass") {
  std::mt19937_64 rng(101);
  for (const auto& f : fields()) {
    const auto mu = rand_measure(rng, 10);
    const auto pushed = flow_push(f, 0.0, 1.0, mu);
    CHECK(total_mass(pushed) == doctest::Approx(total_mass(mu)).epsilon(1e-15));
  }
}

TEST_CASE("step underflow is reported") {
  FlowOptions o;
  o.max_steps = 4;
  o.tolerance = 1e-16;
  const auto f = VectorFieldSpec::rotation(1.0, 1.0);
  try {
    integrate_flow(f, 0.0, 10.0, Eigen::Vector2d(1, 0), o);
    FAIL("expected an integration failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIntegrationFailure);
  }
}

TEST_CASE("declared constants pass spot checks") {
  for (const auto& f : fields()) {
    const auto r = spot_check(f, 5);
    CHECK(r.passed());
    CHECK(r.samples >= 10000);
  }
  // Understated constants are detected.
  const auto bad = VectorFieldSpec::rotation(2.0, 1.0).with_constants(1.0, 1.0);
  const auto r = spot_check(bad, 5);
  CHECK_FALSE(r.lipschitz_ok);
  CHECK_FALSE(r.sup_norm_ok);
}

TEST_CASE("growth factor") {
  CHECK(growth_factor(0.0, 0.5) == 0.5);
  CHECK(growth_factor(1e-12, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(growth_factor(2.0, 0.5) == doctest::Approx(std::expm1(1.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("estimates for zero fields are equalities") {
  std::mt19937_64 rng(103);
  const auto mu = rand_measure(rng, 6);
  const auto nu = rand_measure(rng, 6).scaled(1.0);
  const auto nu_eq = nu.scaled(total_mass(mu) / total_mass(nu));
  const auto z = VectorFieldSpec::zero(2);
  const auto rep = verify_flow_estimates(z, z, mu, nu_eq, 0.5, {1, 1, 1});
  CHECK(rep.passed());
  REQUIRE(rep.estimates.size() == 6);
  for (const auto& e : rep.estimates) {
    CHECK(e.applicable);
    CHECK(std::abs(e.lhs - e.rhs) <= 1e-9 * std::max(1.0, e.rhs));
  }
}

TEST_CASE("estimate (2) is an equality for a constant field") {
  std::mt19937_64 rng(107);
  const auto mu = rand_measure(rng, 6);
  const auto c = VectorFieldSpec::constant(Eigen::Vector2d(0.6, -0.8), 3);
  for (double t : {0.1, 0.5, 1.0}) {
    for (double p : {1.0, 2.0}) {
      const auto rep = verify_flow_estimates(c, c, mu, mu, t, {1, 1, p});
      CHECK(rep.passed());
      CHECK(rep.estimates[1].lhs == doctest::Approx(t * total_mass(mu)).epsilon(1e-9));
      CHECK(rep.estimates[1].rhs == doctest::Approx(t * total_mass(mu)).epsilon(1e-12));
    }
  }
}

TEST_CASE("translations are isometries") {
  std::mt19937_64 rng(109);
  const auto mu = rand_measure(rng, 6);
  const auto nu = rand_measure(rng, 6);
  const auto nu_eq = nu.scaled(total_mass(mu) / total_mass(nu));
  const auto c = VectorFieldSpec::constant(Eigen::Vector2d(0.6, -0.8), 3);
  const auto rep = verify_flow_estimates(c, c, mu, nu_eq, 1.0, {1, 1, 2});
  CHECK(std::abs(rep.estimates[0].lhs - rep.estimates[0].rhs) <= 1e-9);
}

TEST_CASE("estimate sweep over the registry") {
  std::mt19937_64 rng(113);
  const auto fs = fields();
  for (size_t i = 0; i < fs.size(); ++i) {
    const auto& v = fs[i];
    const auto& w = fs[(i + 2) % fs.size()];
    for (int pair = 0; pair < 3; ++pair) {
      const auto mu = rand_measure(rng, 5);
      auto nu = rand_measure(rng, 5);
      if (pair == 0) nu = nu.scaled(total_mass(mu) / total_mass(nu));
      for (double t : {0.1, 0.5, 1.0}) {
        const auto rep = verify_flow_estimates(v, w, mu, nu, t, {1, 1, 1.0 + pair % 2}, pair);
        CHECK(rep.passed());
        CHECK(rep.estimates[0].applicable == (pair == 0));
      }
    }
  }
}
