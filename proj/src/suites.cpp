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

#include "genwass/suites.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "genwass/dynamics.hpp"
#include "genwass/error.hpp"
#include "genwass/exact_ot.hpp"
#include "genwass/flat_dual.hpp"
#include "genwass/flows.hpp"
#include "genwass/random.hpp"

namespace genwass {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"metric", "duality", "flows", "gbb",
                                              "sah",    "split",   "kr"};
  return names;
}

std::vector<VectorFieldSpec> registry_fields() {
  Eigen::MatrixXd A(2, 2);
  A << 0.2, 0.5, -0.4, 0.1;
  return {
      VectorFieldSpec::constant(Point((Point(2) << 0.6, -0.3).finished()), 3.0),
      VectorFieldSpec::affine(A, Point((Point(2) << 0.1, 0.2).finished()), 3.0),
      VectorFieldSpec::rotation(1.0, 1.5),
      VectorFieldSpec::gaussian_gradient(1.0, 0.7, Point((Point(2) << 0.3, -0.2).finished())),
      VectorFieldSpec::rotation(1.0, 1.5).time_scaled(TimeScaling{1.0, 0.5, 3.0}),
  };
}

io::Scenario standard_scenario() {
  Point x(2), z(2);
  x << 1.0, 0.0;
  z << 0.0, 0.8;
  return {DiscreteMeasure::dirac(x, 1.0), VectorFieldSpec::rotation(1.0, 1.5),
          SourceSpec::constant(SignedDiscreteMeasure(DiscreteMeasure::dirac(z, 0.5)))};
}

namespace {

std::string fmt(double x) { return io::format_double(x); }

void note(SuiteReport& r, const std::string& what) {
  if (r.failure_details.size() < 50) r.failure_details.push_back(what);
}

void fail(SuiteReport& r, const std::string& what) {
  ++r.failures;
  note(r, what);
}

int random_dim(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

DiscreteMeasure with_mass(const DiscreteMeasure& m, double mass) {
  const double current = total_mass(m);
  return current > 0.0 ? m.scaled(mass / current) : m;
}

SuiteReport metric_suite(const SuiteOptions& o) {
  SuiteReport r;
  std::mt19937_64 rng(o.seed);
  io::Json per_p = io::Json::array();
  r.worst = std::numeric_limits<double>::infinity();
  for (double p : {1.0, 2.0}) {
    std::vector<MeasureTriple> triples;
    for (int i = 0; i < o.n; ++i) {
      RandomMeasureOptions ro;
      ro.dim = random_dim(rng, 1, 3);
      ro.min_atoms = 0;
      ro.max_atoms = 6;
      DiscreteMeasure mu = random_measure(rng, ro);
      DiscreteMeasure nu = i % 10 == 3 ? mu : random_measure(rng, ro);
      triples.push_back({mu, nu, random_measure(rng, ro)});
    }
    GenWassParams params = o.params;
    params.p = p;
    const MetricAxiomReport m = metric_axiom_suite(triples, params);
    r.cases += m.triples;
    r.failures += m.symmetry_violations + m.identity_violations + m.triangle_violations;
    for (const std::string& f : m.failures) note(r, "p=" + fmt(p) + " " + f);
    r.worst = std::min(r.worst, m.worst_triangle_slack);
    per_p.push_back(io::Json{{"p", p},
                             {"triples", m.triples},
                             {"symmetry_violations", m.symmetry_violations},
                             {"identity_violations", m.identity_violations},
                             {"triangle_violations", m.triangle_violations},
                             {"worst_triangle_slack", m.worst_triangle_slack}});
  }
  r.details["by_p"] = per_p;
  return r;
}

SuiteReport duality_suite(const SuiteOptions& o) {
  SuiteReport r;
  std::mt19937_64 rng(o.seed);
  double worst_tv = 0.0, worst_feasibility = 0.0;
  for (int i = 0; i < o.n; ++i) {
    RandomMeasureOptions ro;
    ro.dim = random_dim(rng, 1, 3);
    ro.max_atoms = 30;
    const DiscreteMeasure mu = random_measure(rng, ro), nu = random_measure(rng, ro);
    const FlatComparison c = verify_flat_equals_genwass(mu, nu);
    const double tv = tv_dual(mu, nu);
    const double tv_err = std::abs(tv - tv_norm(SignedDiscreteMeasure(mu) - nu));
    const double feas =
        std::max(c.potential.box_violation(), c.potential.lipschitz_violation());
    r.worst = std::max(r.worst, c.difference);
    worst_tv = std::max(worst_tv, tv_err);
    worst_feasibility = std::max(worst_feasibility, feas);
    ++r.cases;
    if (!c.passed(1e-6)) {
      fail(r, "pair " + std::to_string(i) + ": flat " + fmt(c.flat) + " vs W " + fmt(c.genwass));
    } else if (tv_err > 1e-9 || c.flat > tv + 1e-9 || feas > 1e-9) {
      fail(r, "pair " + std::to_string(i) + ": TV dual or potential feasibility");
    }
  }
  r.details["worst_difference"] = r.worst;
  r.details["worst_tv_error"] = worst_tv;
  r.details["worst_potential_violation"] = worst_feasibility;
  return r;
}

SuiteReport flows_suite(const SuiteOptions& o) {
  SuiteReport r;
  std::mt19937_64 rng(o.seed);
  const std::vector<VectorFieldSpec> fields = registry_fields();
  r.worst = std::numeric_limits<double>::infinity();
  io::Json per_field = io::Json::array();
  for (size_t f = 0; f < fields.size(); ++f) {
    const VectorFieldSpec& v = fields[f];
    const VectorFieldSpec& w = fields[(f + 1) % fields.size()];
    const FieldSpotCheck spot = spot_check(v, o.seed + f, 10000);
    ++r.cases;
    if (!spot.passed()) fail(r, "field " + v.kind() + ": declared constants violated");
    double field_worst = std::numeric_limits<double>::infinity();
    int field_failures = 0;
    for (int i = 0; i < o.n; ++i) {
      RandomMeasureOptions ro;
      ro.dim = 2;
      ro.max_atoms = 6;
      ro.min_mass = 0.1;
      ro.max_mass = 3.0;
      ro.box = 0.7;
      const DiscreteMeasure mu = random_measure(rng, ro);
      const DiscreteMeasure nu = with_mass(random_measure(rng, ro), total_mass(mu));
      for (double t : {0.1, 0.5, 1.0}) {
        const FlowEstimateReport e =
            verify_flow_estimates(v, w, mu, nu, t, o.params, o.seed + 7 * i);
        ++r.cases;
        field_worst = std::min(field_worst, e.worst_slack);
        if (!e.passed()) {
          ++field_failures;
          ++r.failures;
          for (const FlowEstimate& x : e.estimates) {
            if (!x.passed) {
              note(r, v.kind() + " pair " + std::to_string(i) + " t=" + fmt(t) +
                          " estimate (" + std::to_string(x.index) + ") slack " + fmt(x.slack));
            }
          }
        }
      }
    }
    r.worst = std::min(r.worst, field_worst);
    per_field.push_back(io::Json{{"field", io::field_to_json(v)},
                                 {"spot_check_quotient", spot.max_quotient},
                                 {"spot_check_norm", spot.max_norm},
                                 {"worst_slack", field_worst},
                                 {"failures", field_failures}});
  }
  r.details["fields"] = per_field;
  return r;
}

io::Json gbb_json(const GbbReport& g) {
  io::Json upper = io::Json::array();
  for (const GbbLevel& l : g.upper) {
    upper.push_back(io::Json{{"k", l.k}, {"B", l.B}, {"bound", l.bound}, {"passed", l.passed}});
  }
  return io::Json{{"T", g.T},
                  {"m_star", g.m_star},
                  {"upper", upper},
                  {"upper_monotone", g.upper_monotone},
                  {"paths", g.paths},
                  {"min_path_B", g.min_path_B},
                  {"lower_residual", g.min_path_B - g.T},
                  {"counterexamples", g.counterexamples}};
}

SuiteReport gbb_suite(const SuiteOptions& o) {
  SuiteReport r;
  GenWassParams params = o.params;
  params.p = 2.0;
  const int k_max = o.k > 0 ? o.k : 10;
  std::mt19937_64 rng(o.seed);
  const GbbReport dirac = verify_gbb(DiscreteMeasure::on_line({{0.0, 1.0}}),
                                     DiscreteMeasure::on_line({{1.0, 1.0}}), params,
                                     k_max, 100, o.seed);
  ++r.cases;
  r.worst = dirac.min_path_B - dirac.T;
  if (!dirac.passed()) fail(r, "dirac benchmark");
  r.details["dirac"] = gbb_json(dirac);
  io::Json instances = io::Json::array();
  for (int i = 0; i < o.n; ++i) {
    RandomMeasureOptions ro;
    ro.dim = random_dim(rng, 1, 2);
    ro.max_atoms = 10;
    ro.max_mass = 3.0;
    const DiscreteMeasure mu0 = random_measure(rng, ro), mu1 = random_measure(rng, ro);
    const GbbReport g = verify_gbb(mu0, mu1, params, k_max, 100, o.seed + 1 + i);
    ++r.cases;
    r.worst = std::min(r.worst, g.min_path_B - g.T);
    if (!g.passed()) {
      fail(r, "instance " + std::to_string(i));
      for (const std::string& c : g.counterexamples) note(r, "instance " + std::to_string(i) + " " + c);
    }
    instances.push_back(io::Json{{"T", g.T},
                                 {"B_kmax", g.upper.empty() ? 0.0 : g.upper.back().B},
                                 {"min_path_B", g.min_path_B},
                                 {"passed", g.passed()}});
  }
  r.details["instances"] = instances;
  return r;
}

SuiteReport sah_suite(const SuiteOptions& o) {
  SuiteReport r;
  GenWassParams params = o.params;
  params.p = 2.0;
  const io::Scenario s = standard_scenario();
  const int k_max = o.k > 0 ? o.k : 8;
  const SahConvergenceReport c =
      verify_sample_and_hold_convergence(s.field, s.source, s.mu0, 3, k_max, params);
  r.cases = static_cast<int>(c.k.size()) + c.quasi_lipschitz.checks;
  if (!c.decay_ok) fail(r, "D_k decay ratio above " + fmt(c.decay_limit));
  if (!c.final_ok) fail(r, "final-state error against the Duhamel reference grew");
  if (!c.quasi_lipschitz.passed()) {
    fail(r, std::to_string(c.quasi_lipschitz.violations) + " quasi-Lipschitz violations");
  }
  io::Json rows = io::Json::array();
  for (size_t i = 0; i < c.k.size(); ++i) {
    io::Json row{{"k", c.k[i]}, {"D_k", c.D[i]}};
    row["ratio"] = std::isnan(c.ratio[i]) ? io::Json(nullptr) : io::Json(c.ratio[i]);
    row["final_error"] = c.final_error[i];
    rows.push_back(row);
    if (!std::isnan(c.ratio[i])) r.worst = std::max(r.worst, c.ratio[i]);
  }
  r.details["kind"] = "sah_convergence";
  r.details["scenario"] = io::scenario_to_json(s);
  r.details["rows"] = rows;
  r.details["decay_limit"] = c.decay_limit;
  r.details["quasi_lipschitz"] = io::Json{{"checks", c.quasi_lipschitz.checks},
                                          {"violations", c.quasi_lipschitz.violations},
                                          {"worst_ratio", c.quasi_lipschitz.worst_ratio}};
  return r;
}

SuiteReport split_suite(const SuiteOptions& o) {
  SuiteReport r;
  std::mt19937_64 rng(o.seed);
  for (int i = 0; i < o.n; ++i) {
    RandomMeasureOptions ro;
    ro.dim = random_dim(rng, 1, 2);
    ro.max_atoms = 6;
    ro.min_mass = 0.5;
    const DiscreteMeasure mu = random_measure(rng, ro);
    const DiscreteMeasure nu = with_mass(random_measure(rng, ro), total_mass(mu));
    const DiscreteMeasure mu_prime = random_sub_measure(rng, mu);
    const double p = i % 2 == 0 ? 1.0 : 2.0;
    const SplitIdentityReport s = check_split_identity(mu, nu, mu_prime, p);
    ++r.cases;
    r.worst = std::max(r.worst, std::abs(s.lhs - s.rhs));
    if (!s.passed()) {
      fail(r, "instance " + std::to_string(i) + ": lhs " + fmt(s.lhs) + " rhs " + fmt(s.rhs));
    }
  }
  r.details["worst_difference"] = r.worst;
  return r;
}

SuiteReport kr_suite(const SuiteOptions& o) {
  SuiteReport r;
  std::mt19937_64 rng(o.seed);
  for (int i = 0; i < o.n; ++i) {
    RandomMeasureOptions ro;
    ro.dim = random_dim(rng, 1, 3);
    ro.max_atoms = 12;
    ro.min_mass = 0.1;
    const DiscreteMeasure mu = random_measure(rng, ro);
    const DiscreteMeasure nu = with_mass(random_measure(rng, ro), total_mass(mu));
    const double dual = kr_dual(mu, nu);
    const double primal = wasserstein(mu, nu, 1.0).distance;
    ++r.cases;
    r.worst = std::max(r.worst, std::abs(dual - primal));
    if (std::abs(dual - primal) > 1e-7) {
      fail(r, "pair " + std::to_string(i) + ": dual " + fmt(dual) + " vs W_1 " + fmt(primal));
    }
  }
  r.details["worst_difference"] = r.worst;
  return r;
}

}  // namespace

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  options.params.validate();
  if (options.n < 0) throw Error(ErrorCode::kInvalidParameter, "n must be >= 0");
  SuiteReport r;
  if (name == "metric") r = metric_suite(options);
  else if (name == "duality") r = duality_suite(options);
  else if (name == "flows") r = flows_suite(options);
  else if (name == "gbb") r = gbb_suite(options);
  else if (name == "sah") r = sah_suite(options);
  else if (name == "split") r = split_suite(options);
  else if (name == "kr") r = kr_suite(options);
  else throw Error(ErrorCode::kInvalidParameter, "unknown suite \"" + name + "\"");
  r.suite = name;
  return r;
}

io::Json suite_to_json(const SuiteReport& r, const SuiteOptions& o) {
  io::Json out = io::Json::object();
  out["kind"] = r.details.contains("kind") ? r.details["kind"] : io::Json("check");
  out["suite"] = r.suite;
  out["seed"] = o.seed;
  out["n"] = o.n;
  out["params"] = io::params_to_json(o.params);
  out["cases"] = r.cases;
  out["passed"] = std::max(0, r.cases - r.failures);
  out["failures"] = r.failures;
  out["worst"] = std::isfinite(r.worst) ? io::Json(r.worst) : io::Json(nullptr);
  out["failure_details"] = r.failure_details;
  out["details"] = r.details;
  return out;
}

}  // namespace genwass
