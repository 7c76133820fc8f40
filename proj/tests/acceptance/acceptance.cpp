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

// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "genwass/dynamics.hpp"
#include "genwass/exact_ot.hpp"
#include "genwass/flat_dual.hpp"
#include "genwass/genwass.hpp"
#include "genwass/random.hpp"
#include "genwass/suites.hpp"
#include "support/oracles.hpp"

using namespace genwass;

namespace {

struct Outcome {
  bool passed = true;
  std::string summary;
};

DiscreteMeasure rand_measure(std::mt19937_64& rng, int dim, int max_atoms,
                             double min_mass = 0.0, double max_mass = 5.0) {
  RandomMeasureOptions o;
  o.dim = dim;
  o.max_atoms = max_atoms;
  o.min_mass = min_mass;
  o.max_mass = max_mass;
  return random_measure(rng, o);
}

DiscreteMeasure match_mass(const DiscreteMeasure& nu, const DiscreteMeasure& mu) {
  return nu.scaled(total_mass(mu) / total_mass(nu));
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

Outcome duality() {
  std::mt19937_64 rng(1001);
  const int pairs = 500;
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < pairs; ++i) {
    const int d = 1 + i % 3;
    const auto r = verify_flat_equals_genwass(rand_measure(rng, d, 30), rand_measure(rng, d, 30));
    worst = std::max(worst, r.difference);
    if (!(r.difference <= 1e-6)) ++failures;
  }
  return {failures == 0, fmt("pairs=%d failures=%d max|d-W|=%.2e", pairs, failures, worst)};
}

Outcome kantorovich_rubinstein() {
  std::mt19937_64 rng(1002);
  const int pairs = 200;
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < pairs; ++i) {
    const int d = 1 + i % 3;
    const auto mu = rand_measure(rng, d, 30, 0.1);
    const auto nu = match_mass(rand_measure(rng, d, 30, 0.1), mu);
    const double gap = std::abs(kr_dual(mu, nu) - wasserstein(mu, nu, 1).distance);
    worst = std::max(worst, gap);
    if (!(gap <= 1e-7)) ++failures;
  }
  return {failures == 0, fmt("pairs=%d failures=%d max gap=%.2e", pairs, failures, worst)};
}

Outcome brute_force() {
  std::mt19937_64 rng(1003);
  const int instances = 100;
  const std::pair<double, double> weights[] = {{1, 1}, {2, 0.5}, {0.5, 2}};
  double worst = 0.0;
  int checks = 0, failures = 0;
  for (int i = 0; i < instances; ++i) {
    const int d = 1 + i % 2;
    const auto mu = rand_measure(rng, d, 4);
    const auto nu = rand_measure(rng, d, 4);
    for (double p : {1.0, 2.0}) {
      const oracle::BruteForceT brute(mu, nu, p, 10000);
      for (auto [a, b] : weights) {
        const double gap =
            std::abs(generalized_distance(mu, nu, {a, b, p}).T - brute.minimize(a, b).T);
        worst = std::max(worst, gap);
        ++checks;
        if (!(gap <= 1e-6)) ++failures;
      }
    }
  }
  return {failures == 0, fmt("instances=%d checks=%d failures=%d max|T-T_brute|=%.2e",
                             instances, checks, failures, worst)};
}

Outcome metric_axioms() {
  std::mt19937_64 rng(1004);
  std::vector<MeasureTriple> triples;
  for (int i = 0; i < 200; ++i) {
    const int d = 1 + i % 3;
    triples.push_back(
        {rand_measure(rng, d, 8), rand_measure(rng, d, 8), rand_measure(rng, d, 8)});
  }
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (double p : {1.0, 2.0}) {
    for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 0.5}}) {
      const auto r = metric_axiom_suite(triples, {a, b, p});
      violations += r.symmetry_violations + r.identity_violations + r.triangle_violations;
      worst = std::min(worst, r.worst_triangle_slack);
    }
  }
  return {violations == 0, fmt("triples=%zu settings=4 violations=%d min triangle slack=%.2e",
                               triples.size(), violations, worst)};
}

Outcome split_identity() {
  std::mt19937_64 rng(1005);
  const int instances = 100;
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const int d = 1 + i % 3;
    const auto mu = rand_measure(rng, d, 6, 0.2);
    const auto nu = match_mass(rand_measure(rng, d, 6, 0.2), mu);
    const double p = 1.0 + i % 2;
    const auto sub = i % 4 == 0 ? mu.scaled(0.5) : random_sub_measure(rng, mu);
    const auto r = check_split_identity(mu, nu, sub, p);
    const double gap = std::abs(r.lhs - r.rhs) / std::max(1.0, r.lhs);
    worst = std::max(worst, gap);
    if (!r.passed() || !(gap <= 1e-9)) ++failures;
  }
  return {failures == 0, fmt("restrictions=%d failures=%d max relative gap=%.2e", instances,
                             failures, worst)};
}

Outcome flow_estimates() {
  SuiteOptions o;
  o.seed = 1006;
  o.n = 20;
  const SuiteReport r = run_suite("flows", o);
  return {r.passed(), fmt("fields=%zu pairs=%d checks=%d failures=%d min slack=%.2e",
                          registry_fields().size(), o.n, r.cases, r.failures, r.worst)};
}

std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>> gbb_instances(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>> out;
  out.emplace_back(DiscreteMeasure::on_line({{0.0, 1.0}}), DiscreteMeasure::on_line({{1.0, 1.0}}));
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + i % 2;
    out.emplace_back(rand_measure(rng, d, 10, 0.1, 3), rand_measure(rng, d, 10, 0.1, 3));
  }
  out.emplace_back(out[1].first, out[1].first);
  return out;
}

Outcome gbb_upper() {
  int failures = 0, checks = 0;
  double dirac_gap = 0.0, worst = -std::numeric_limits<double>::infinity();
  const auto instances = gbb_instances(1007);
  for (size_t i = 0; i < instances.size(); ++i) {
    for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}}) {
      const GenWassParams params{a, b, 2};
      const double T = generalized_distance(instances[i].first, instances[i].second, params).T;
      for (int k = 2; k <= 10; ++k) {
        const double B = action_functional(
            constructive_geodesic(instances[i].first, instances[i].second, params, k), params);
        const double bound = T / (1.0 - std::ldexp(1.0, 1 - k));
        worst = std::max(worst, B - bound);
        ++checks;
        if (!(B <= bound + 1e-9)) ++failures;
        if (i == 0 && a == 1.0 && b == 1.0 && k == 10) dirac_gap = (B - T) / T;
      }
    }
  }
  const bool dirac_ok = dirac_gap <= 3e-3;
  return {failures == 0 && dirac_ok,
          fmt("instances=%zu checks=%d failures=%d max(B-bound)=%.2e dirac (B10-T)/T=%.5f",
              instances.size(), checks, failures, worst, dirac_gap)};
}

Outcome gbb_lower() {
  const auto instances = gbb_instances(1008);
  const int per_instance = 100;
  int paths = 0, counterexamples = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(1009);
  for (const auto& [mu0, mu1] : instances) {
    const double T = generalized_distance(mu0, mu1, {1, 1, 2}).T;
    for (int j = 0; j < per_instance; ++j) {
      const double B = action_functional(random_feasible_path(mu0, mu1, rng), {1, 1, 2});
      worst = std::min(worst, B - T);
      ++paths;
      if (B < T - 1e-6) ++counterexamples;
    }
  }
  return {counterexamples == 0, fmt("instances=%zu paths=%d counterexamples=%d min(B-T)=%.3e",
                                    instances.size(), paths, counterexamples, worst)};
}

Outcome sah_convergence() {
  const auto sc = standard_scenario();
  const auto r = verify_sample_and_hold_convergence(sc.field, sc.source, sc.mu0, 3, 8, {1, 1, 2});
  std::string ratios;
  bool ratios_ok = true;
  for (size_t i = 0; i < r.k.size(); ++i) {
    if (r.k[i] < 4) continue;
    ratios += fmt("%s%d:%.3f", ratios.empty() ? "" : " ", r.k[i], r.ratio[i]);
    if (!(r.ratio[i] <= 0.75)) ratios_ok = false;
  }
  const auto& q = r.quasi_lipschitz;
  return {ratios_ok && q.passed(),
          fmt("ratios {%s} quasi-Lipschitz checks=%d violations=%d worst W/bound=%.3f",
              ratios.c_str(), q.checks, q.violations, q.worst_ratio)};
}

Outcome empty_target() {
  std::mt19937_64 rng(1010);
  int checks = 0, failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto mu = rand_measure(rng, 1 + i % 3, 12);
    for (double p : {1.0, 2.0, 3.0}) {
      for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}}) {
        const double W = generalized_distance(mu, DiscreteMeasure(mu.dim()), {a, b, p}).W;
        const double gap = std::abs(W - a * total_mass(mu));
        worst = std::max(worst, gap);
        ++checks;
        if (!(gap <= 1e-10)) ++failures;
      }
    }
  }
  return {failures == 0, fmt("checks=%d failures=%d max|W-a|mu||=%.2e", checks, failures, worst)};
}

Outcome homogeneity() {
  std::mt19937_64 rng(1011);
  int checks = 0, failures = 0;
  double worst = 0.0;
  auto record = [&](double scaled, double base, double k) {
    const double rel = std::abs(scaled - k * base) / std::max(k * base, 1e-300);
    worst = std::max(worst, base > 0 ? rel : std::abs(scaled));
    ++checks;
    if (!(base > 0 ? rel <= 1e-10 : scaled == 0.0)) ++failures;
  };
  for (int i = 0; i < 60; ++i) {
    const int d = 1 + i % 3;
    const auto mu = rand_measure(rng, d, 10, 0.1);
    const auto nu = match_mass(rand_measure(rng, d, 10, 0.1), mu);
    const auto other = rand_measure(rng, d, 10, 0.1);
    for (double p : {1.0, 2.0}) {
      const double w = wasserstein(mu, nu, p).distance;
      const double g = generalized_distance(mu, other, {1, 1, p}).W;
      for (double k : {0.5, 2.0, 10.0}) {
        record(wasserstein(mu.scaled(k), nu.scaled(k), p).distance, w, k);
        record(generalized_distance(mu.scaled(k), other.scaled(k), {1, 1, p}).W, g, k);
      }
    }
  }
  return {failures == 0, fmt("checks=%d failures=%d max relative error=%.2e", checks, failures,
                             worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "flat metric equals W_1^{1,1}", duality},
      {2, "Kantorovich-Rubinstein duality", kantorovich_rubinstein},
      {3, "T_p^{a,b} against brute force", brute_force},
      {4, "metric axioms", metric_axioms},
      {5, "split identity", split_identity},
      {6, "flow estimates", flow_estimates},
      {7, "Benamou-Brenier upper side", gbb_upper},
      {8, "Benamou-Brenier lower side", gbb_lower},
      {9, "sample-and-hold convergence", sah_convergence},
      {10, "W(mu, 0) = a|mu|", empty_target},
      {11, "homogeneity", homogeneity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s: %s (%s, %.2fs)\n", c.id, o.passed ? "PASS" : "FAIL", c.name,
                o.summary.c_str(), secs);
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
