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
#include <random>

#include "doctest.h"
#include "genwass/error.hpp"
#include "genwass/exact_ot.hpp"
#include "genwass/random.hpp"
#include "support/oracles.hpp"

using namespace genwass;

namespace {

Point pt(double x, double y) { return Eigen::Vector2d(x, y); }

std::pair<DiscreteMeasure, DiscreteMeasure> equal_mass_pair(std::mt19937_64& rng,
                                                            int dim, int max_atoms) {
  RandomMeasureOptions o;
  o.dim = dim;
  o.max_atoms = max_atoms;
  o.min_mass = 0.5;
  const auto mu = random_measure(rng, o);
  const auto nu = random_measure(rng, o);
  return {mu, nu.scaled(total_mass(mu) / total_mass(nu))};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kPrecondition;
}

}  // namespace

TEST_CASE("wasserstein examples") {
  const auto d0 = DiscreteMeasure::on_line({{0.0, 1.0}});
  const auto d1 = DiscreteMeasure::on_line({{1.0, 1.0}});
  CHECK(wasserstein(d0, d1, 1).distance == 1.0);

  const double k = 3.5;
  const auto x = DiscreteMeasure::dirac(pt(0, 0), k);
  const auto y = DiscreteMeasure::dirac(pt(3, 4), k);
  CHECK(wasserstein(x, y, 2).distance == doctest::Approx(5 * k).epsilon(1e-14));

  const auto mu = DiscreteMeasure::on_line({{0.0, 1.0}, {2.0, 1.0}});
  const auto nu = DiscreteMeasure::on_line({{1.0, 2.0}});
  const auto r = wasserstein(mu, nu, 1);
  CHECK(r.raw_cost == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.distance == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("wasserstein errors") {
  const auto d0 = DiscreteMeasure::on_line({{0.0, 1.0}});
  const auto d1 = DiscreteMeasure::on_line({{1.0, 2.0}});
  CHECK(code_of([&] { wasserstein(d0, d1, 1); }) == ErrorCode::kUnequalMass);
  CHECK(code_of([&] { wasserstein(d0, d0, 0.5); }) == ErrorCode::kInvalidParameter);
  CHECK(code_of([&] { wasserstein(d0, DiscreteMeasure::dirac(pt(0, 0)), 1); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(wasserstein(DiscreteMeasure(1), DiscreteMeasure(1), 2).distance == 0.0);
  // Masses within the relative tolerance are accepted.
  CHECK_NOTHROW(wasserstein(d0, d0.scaled(1 + 1e-11), 1));
}

TEST_CASE("raw cost matches the dense LP on 4x4 instances") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    RandomMeasureOptions o;
    o.dim = 1 + i % 3;
    o.min_atoms = o.max_atoms = 4;
    o.min_mass = 0.5;
    const auto mu = random_measure(rng, o);
    const auto nu = random_measure(rng, o).scaled(1.0);
    const auto nu_eq = nu.scaled(total_mass(mu) / total_mass(nu));
    for (double p : {1.0, 2.0}) {
      const auto r = wasserstein(mu, nu_eq, p);
      CHECK(std::abs(r.raw_cost - oracle::dense_lp_raw_cost(mu, nu_eq, p)) <= 1e-9);
      CHECK(marginal_residual(r.plan, mu, nu_eq) <= 1e-10);
    }
  }
}

TEST_CASE("plans are deterministic") {
  std::mt19937_64 rng(2);
  const auto [mu, nu] = equal_mass_pair(rng, 2, 8);
  const auto a = wasserstein(mu, nu, 2).plan.dense();
  const auto b = wasserstein(mu, nu, 2).plan.dense();
  CHECK(a == b);
}

TEST_CASE("homogeneity") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 40; ++i) {
    const auto [mu, nu] = equal_mass_pair(rng, 1 + i % 3, 10);
    for (double p : {1.0, 2.0}) {
      const double base = wasserstein(mu, nu, p).distance;
      for (double k : {0.5, 2.0, 10.0}) {
        const double scaled = wasserstein(mu.scaled(k), nu.scaled(k), p).distance;
        CHECK(std::abs(scaled - k * base) <= 1e-10 * std::max(k * base, 1e-300));
      }
    }
  }
}

TEST_CASE("mean cost is nondecreasing in p") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 40; ++i) {
    const auto [mu, nu] = equal_mass_pair(rng, 2, 10);
    const double m = total_mass(mu);
    const double w1 = wasserstein(mu, nu, 1).raw_cost / m;
    const double w2 = std::sqrt(wasserstein(mu, nu, 2).raw_cost / m);
    CHECK(w1 <= w2 * (1 + 1e-12));
  }
}

TEST_CASE("restrict plan") {
  const auto mu = DiscreteMeasure::on_line({{0.0, 1.0}, {5.0, 2.0}});
  const auto nu = DiscreteMeasure::on_line({{1.0, 1.5}, {6.0, 1.5}});
  const auto plan = wasserstein(mu, nu, 1).plan;

  const auto same = restrict_plan(plan, mu, nu, mu);
  CHECK(same.plan.dense() == plan.dense());
  CHECK(same_measure(same.nu_prime, nu));

  const auto half = restrict_plan(plan, mu, nu, mu.scaled(0.5));
  CHECK((half.plan.dense() - 0.5 * plan.dense()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(same_measure(half.nu_prime, nu.scaled(0.5)));

  // Keep only the atom at 5: it sends 0.5 to 1 and 1.5 to 6.
  const auto row = restrict_plan(plan, mu, nu, mu.with_weights(Eigen::Vector2d(0, 2)));
  const Eigen::MatrixXd g = plan.dense();
  REQUIRE(row.nu_prime.size() == 2);
  CHECK(row.nu_prime.weight(0) == doctest::Approx(g(1, 0)));
  CHECK(row.nu_prime.weight(1) == doctest::Approx(g(1, 1)));
  CHECK(g(1, 0) == doctest::Approx(0.5));
  CHECK(g(1, 1) == doctest::Approx(1.5));

  CHECK(code_of([&] { restrict_plan(plan, mu, nu, mu.scaled(2)); }) ==
        ErrorCode::kPrecondition);
}

TEST_CASE("split identity") {
  const auto mu = DiscreteMeasure::on_line({{0.0, 1.0}, {2.0, 1.0}});
  const auto nu = DiscreteMeasure::on_line({{1.0, 2.0}});
  CHECK(check_split_identity(mu, nu, mu, 2).passed());

  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    RandomMeasureOptions o;
    o.min_atoms = o.max_atoms = 3;
    o.dim = 1 + i % 2;
    o.min_mass = 0.5;
    const auto a = random_measure(rng, o);
    const auto b = random_measure(rng, o);
    const auto b_eq = b.scaled(total_mass(a) / total_mass(b));
    for (double p : {1.0, 2.0}) {
      const auto half = check_split_identity(a, b_eq, a.scaled(0.5), p);
      CHECK(half.passed());
      CHECK(std::abs(half.lhs - half.rhs) <= 1e-9 * std::max(1.0, half.lhs));
      const auto sub = check_split_identity(a, b_eq, random_sub_measure(rng, a), p);
      CHECK(sub.passed());
      if (p == 1.0) {
        CHECK(std::abs(sub.restricted_plan_cost + sub.complement_plan_cost -
                       wasserstein(a, b_eq, 1).raw_cost) <= 1e-9);
      }
    }
  }
}

TEST_CASE("Kantorovich-Rubinstein dual") {
  const auto mu = DiscreteMeasure::on_line({{0.0, 1.0}, {2.0, 3.0}});
  CHECK(std::abs(kr_dual(mu, mu)) <= 1e-12);
  CHECK(kr_dual(DiscreteMeasure::on_line({{0.0, 1.0}}),
                DiscreteMeasure::on_line({{3.0, 1.0}})) == doctest::Approx(3.0));
  CHECK(code_of([&] { kr_dual(mu, mu.scaled(2)); }) == ErrorCode::kUnequalMass);

  std::mt19937_64 rng(37);
  for (int i = 0; i < 40; ++i) {
    const auto [a, b] = equal_mass_pair(rng, 1 + i % 3, 12);
    const auto sol = kr_dual_solution(a, b);
    CHECK(std::abs(sol.objective - wasserstein(a, b, 1).distance) <= 1e-7);
    CHECK(sol.lipschitz_violation() <= 1e-9);
  }
}
