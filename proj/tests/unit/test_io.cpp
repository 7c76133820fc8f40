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

#include <random>
#include <string>

#include "doctest.h"
#include "genwass/dynamics.hpp"
#include "genwass/error.hpp"
#include "genwass/io.hpp"
#include "genwass/random.hpp"
#include "genwass/suites.hpp"

using namespace genwass;
using genwass::io::Json;

namespace {

ErrorCode parse_error_code(const std::string& text) {
  try {
    io::parse_measure(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error for " << text);
  return ErrorCode::kPrecondition;
}

}  // namespace

TEST_CASE("measure parsing") {
  const auto m = io::parse_measure(R"({"dim":1,"atoms":[{"x":[0],"w":1},{"x":[1],"w":2}]})");
  CHECK(same_measure(m, DiscreteMeasure::on_line({{0.0, 1.0}, {1.0, 2.0}})));
  const auto merged = io::parse_measure(R"({"dim":1,"atoms":[{"x":[2],"w":1},{"x":[2],"w":0.5}]})");
  REQUIRE(merged.size() == 1);
  CHECK(merged.weight(0) == 1.5);
  CHECK(io::parse_measure(R"({"dim":3,"atoms":[]})").empty());
}

TEST_CASE("measure parse errors are distinct") {
  CHECK(parse_error_code("{\"dim\":1,") == ErrorCode::kParseError);
  CHECK(parse_error_code(R"({"atoms":[]})") == ErrorCode::kSchemaViolation);
  CHECK(parse_error_code(R"({"dim":1,"atoms":[{"x":[0]}]})") == ErrorCode::kSchemaViolation);
  CHECK(parse_error_code(R"({"dim":1,"atoms":[{"x":[0],"w":-1}]})") ==
        ErrorCode::kNegativeWeight);
  CHECK(parse_error_code(R"({"dim":2,"atoms":[{"x":[0],"w":1}]})") ==
        ErrorCode::kDimensionMismatch);
  CHECK(parse_error_code(R"({"dim":1,"atoms":[{"x":[1e999],"w":1}]})") ==
        ErrorCode::kNonFinite);
}

TEST_CASE("measure round trip is bit exact") {
  std::mt19937_64 rng(157);
  for (int i = 0; i < 50; ++i) {
    RandomMeasureOptions o;
    o.dim = 1 + i % 3;
    const auto m = random_measure(rng, o);
    const auto back = io::parse_measure(io::serialize_measure(m));
    CHECK(back.positions() == m.positions());
    CHECK(back.weights() == m.weights());
  }
}

TEST_CASE("double formatting round trips") {
  std::mt19937_64 rng(163);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.1) == "0.1");
}

TEST_CASE("parameters") {
  const auto p = io::params_from_json(io::parse_json(R"({"a":2,"p":2})"));
  CHECK(p.a == 2.0);
  CHECK(p.b == 1.0);
  CHECK(p.p == 2.0);
  CHECK_THROWS_AS(io::params_from_json(io::parse_json(R"({"a":"x"})")), Error);
}

TEST_CASE("solution json") {
  const auto d0 = DiscreteMeasure::on_line({{0.0, 1.0}});
  const auto d1 = DiscreteMeasure::on_line({{1.0, 1.0}});
  const auto s = generalized_distance(d0, d1, {1, 1, 2});
  const Json j = io::solution_to_json(s);
  CHECK(j["kind"] == "genwass_solution");
  CHECK(j["T"].get<double>() == doctest::Approx(0.8));
  CHECK(j["m_star"].get<double>() == doctest::Approx(0.8));
  CHECK(j["plan"]["p"].get<double>() == 2.0);
  REQUIRE(j["plan"]["entries"].size() == 1);
  CHECK(j["plan"]["entries"][0]["mass"].get<double>() == doctest::Approx(0.8));
  CHECK(same_measure(io::measure_from_json(j["tilde_mu"]), s.tilde_mu.normalized()));
  CHECK(j["curve"].is_array());
}

TEST_CASE("field round trip") {
  for (const auto& f : registry_fields()) {
    const Json j = io::field_to_json(f);
    const auto g = io::field_from_json(j);
    CHECK(g.kind() == f.kind());
    CHECK(g.lipschitz() == f.lipschitz());
    CHECK(g.sup_norm() == f.sup_norm());
    const Eigen::Vector2d x(0.3, -0.4);
    CHECK((g(0.37, x) - f(0.37, x)).norm() == 0.0);
  }
  CHECK_THROWS_AS(io::field_from_json(io::parse_json(R"({"kind":"spiral"})")), Error);
  const auto r = io::field_from_json(io::parse_json(R"({"kind":"rotation","omega":2,"R":1,"L":5})"));
  CHECK(r.lipschitz() == 5.0);
}

TEST_CASE("scenario round trip") {
  const auto sc = standard_scenario();
  const auto back = io::scenario_from_json(io::parse_json(io::scenario_to_json(sc).dump()));
  CHECK(same_measure(back.mu0, sc.mu0));
  CHECK(back.field.kind() == sc.field.kind());
  CHECK(back.source.variation(0, 1) == sc.source.variation(0, 1));
  CHECK(io::source_from_json(io::parse_json(R"({"pieces":[]})"), 2).is_zero());
  CHECK_THROWS_AS(io::source_from_json(io::parse_json(
                      R"({"pieces":[{"t0":0,"t1":0.5,"rate":{"dim":2,"atoms":[]}}]})"), 2),
                  Error);
}

TEST_CASE("trajectory export") {
  const auto d0 = DiscreteMeasure::on_line({{0.0, 1.0}});
  const auto d1 = DiscreteMeasure::on_line({{1.0, 1.0}});
  const auto traj = constructive_geodesic(d0, d1, {1, 1, 2}, 2);
  const std::string csv = io::trajectory_csv(traj);
  CHECK(csv.rfind("t,atom_id,x0,w\n", 0) == 0);
  const Json j = io::trajectory_summary(traj, {1, 1, 2});
  CHECK(j["kind"] == "trajectory");
  CHECK(j["B"].get<double>() == doctest::Approx(0.16 + 0.64 / 0.5));
  CHECK(j["series"].size() == traj.times.size());
}
