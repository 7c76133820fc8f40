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
// genwass command-line front end.
//
// Exit codes: 0 success, 1 suite failures, 2 input error, 3 solver error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "genwass/dynamics.hpp"
#include "genwass/error.hpp"
#include "genwass/flat_dual.hpp"
#include "genwass/genwass.hpp"
#include "genwass/io.hpp"
#include "genwass/suites.hpp"

namespace {

using genwass::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

struct Config {
  double a = 1.0;
  double b = 1.0;
  double p = 1.0;
  int k = 0;
  std::uint64_t seed = 1;
  int n = 20;
  std::string out;
  std::string format = "json";
  std::string params_json;
  std::string scheme = "duhamel";
  std::vector<std::string> inputs;
  std::string suite;
};

struct Flags {
  CLI::Option* a = nullptr;
  CLI::Option* b = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* k = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* n = nullptr;
};

Flags add_common(CLI::App* cmd, Config& c) {
  Flags f;
  f.a = cmd->add_option("--a", c.a, "weight of created/removed mass");
  f.b = cmd->add_option("--b", c.b, "weight of transport");
  f.p = cmd->add_option("--p", c.p, "exponent p >= 1");
  f.k = cmd->add_option("--k", c.k, "dyadic level");
  f.seed = cmd->add_option("--seed", c.seed, "random seed");
  f.n = cmd->add_option("--n", c.n, "number of random instances");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--params-json", c.params_json,
                  "JSON object (inline or file) with a, b, p, k, seed, n");
  return f;
}

// Values from --params-json fill in flags that were not given explicitly.
void apply_params_json(Config& c, const Flags& f) {
  if (c.params_json.empty()) return;
  const Json j = c.params_json.front() == '{' ? genwass::io::parse_json(c.params_json)
                                              : genwass::io::read_json_file(c.params_json);
  if (!j.is_object()) {
    throw genwass::Error(genwass::ErrorCode::kSchemaViolation,
                         "--params-json must hold an object");
  }
  auto number = [&](const char* key, CLI::Option* opt, auto& target) {
    if (!j.contains(key) || opt->count() > 0) return;
    if (!j[key].is_number()) {
      throw genwass::Error(genwass::ErrorCode::kSchemaViolation,
                           std::string("\"") + key + "\" must be a number");
    }
    target = j[key].get<std::decay_t<decltype(target)>>();
  };
  number("a", f.a, c.a);
  number("b", f.b, c.b);
  number("p", f.p, c.p);
  number("k", f.k, c.k);
  number("seed", f.seed, c.seed);
  number("n", f.n, c.n);
}

genwass::GenWassParams params_of(const Config& c) { return {c.a, c.b, c.p}; }

Json config_json(const std::string& command, const Config& c) {
  return Json{{"command", command},
              {"params", genwass::io::params_to_json(params_of(c))},
              {"k", c.k},
              {"seed", c.seed},
              {"n", c.n}};
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out);
  if (!out) {
    throw genwass::Error(genwass::ErrorCode::kPrecondition, "cannot write " + c.out);
  }
  out << text;
}

void emit_json(const Config& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

int cmd_dist(const Config& c) {
  const auto mu = genwass::io::load_measure(c.inputs.at(0));
  const auto nu = genwass::io::load_measure(c.inputs.at(1));
  Json out = genwass::io::solution_to_json(genwass::generalized_distance(mu, nu, params_of(c)));
  out["config"] = config_json("dist", c);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "m,rho,f\n";
    for (const Json& row : out["curve"]) {
      os << genwass::io::format_double(row["m"].get<double>()) << ','
         << genwass::io::format_double(row["rho"].get<double>()) << ','
         << genwass::io::format_double(row["f"].get<double>()) << '\n';
    }
    emit(c, os.str());
  } else {
    emit_json(c, out);
  }
  return kExitOk;
}

int cmd_flat(const Config& c) {
  const auto mu = genwass::io::load_measure(c.inputs.at(0));
  const auto nu = genwass::io::load_measure(c.inputs.at(1));
  const genwass::FlatComparison r = genwass::verify_flat_equals_genwass(mu, nu);
  Json out = genwass::io::flat_to_json(r);
  out["config"] = config_json("flat", c);
  emit_json(c, out);
  return kExitOk;
}

int cmd_check(const Config& c) {
  genwass::SuiteOptions o;
  o.seed = c.seed;
  o.n = c.n;
  o.params = params_of(c);
  o.k = c.k;
  const genwass::SuiteReport r = genwass::run_suite(c.suite, o);
  Json out = genwass::suite_to_json(r, o);
  out["config"] = config_json("check " + c.suite, c);
  emit_json(c, out);
  return r.passed() ? kExitOk : kExitFailures;
}

int cmd_geodesic(const Config& c) {
  const auto mu0 = genwass::io::load_measure(c.inputs.at(0));
  const auto mu1 = genwass::io::load_measure(c.inputs.at(1));
  genwass::GenWassParams params = params_of(c);
  params.p = 2.0;
  const int k = c.k > 0 ? c.k : 10;
  const genwass::SourcedTrajectory traj = genwass::constructive_geodesic(mu0, mu1, params, k);
  if (c.format == "csv") {
    emit(c, genwass::io::trajectory_csv(traj));
    return kExitOk;
  }
  const genwass::GenWassSolution sol = genwass::generalized_distance(mu0, mu1, params);
  Json out = genwass::io::trajectory_summary(traj, params);
  const double B = out["B"].get<double>();
  out["T"] = sol.T;
  out["m_star"] = sol.m_star;
  out["bound"] = sol.T / (1.0 - std::ldexp(1.0, 1 - k));
  out["excess"] = B - sol.T;
  out["config"] = config_json("geodesic", c);
  emit_json(c, out);
  return kExitOk;
}

int cmd_simulate(const Config& c) {
  const genwass::io::Scenario s =
      genwass::io::scenario_from_json(genwass::io::read_json_file(c.inputs.at(0)));
  const int k = c.k > 0 ? c.k : 6;
  genwass::GenWassParams params = params_of(c);
  params.p = 2.0;
  genwass::SourcedTrajectory traj;
  Json extra = Json::object();
  if (c.scheme == "sah") {
    traj = genwass::sample_and_hold(s.field, s.source, s.mu0, k).trajectory;
  } else {
    genwass::DuhamelReport rep;
    traj = genwass::solve_transport_with_source(s.mu0, s.field, s.source,
                                                genwass::dyadic_grid(k), {}, &rep);
    extra = Json{{"nodes_per_piece", rep.nodes_per_piece},
                 {"refinement_change", std::isfinite(rep.refinement_change)
                                           ? Json(rep.refinement_change)
                                           : Json(nullptr)},
                 {"converged", rep.converged}};
  }
  if (c.format == "csv") {
    emit(c, genwass::io::trajectory_csv(traj));
    return kExitOk;
  }
  Json out = genwass::io::trajectory_summary(traj, params);
  out["scheme"] = c.scheme;
  if (!extra.empty()) out["duhamel"] = extra;
  out["final_measure"] = genwass::io::measure_to_json(traj.measures.back());
  out["config"] = config_json("simulate", c);
  emit_json(c, out);
  return traj.positivity_violation ? kExitFailures : kExitOk;
}

std::string cell(const Json& v) {
  if (v.is_number()) return genwass::io::format_double(v.get<double>());
  if (v.is_null()) return "nan";
  return v.dump();
}

int cmd_plotdata(const Config& c) {
  const Json report = genwass::io::read_json_file(c.inputs.at(0));
  if (!report.is_object()) {
    throw genwass::Error(genwass::ErrorCode::kSchemaViolation, "report must be an object");
  }
  const std::string kind =
      report.contains("kind") && report["kind"].is_string() ? report["kind"].get<std::string>() : "";
  std::vector<std::string> columns;
  const Json* rows = nullptr;
  auto find_rows = [&](const char* key) -> const Json* {
    if (report.contains(key)) return &report[key];
    if (report.contains("details") && report["details"].contains(key)) return &report["details"][key];
    return nullptr;
  };
  if (kind == "sah_convergence" || (kind.empty() && find_rows("rows"))) {
    columns = {"k", "D_k", "ratio"};
    rows = find_rows("rows");
  } else if (kind == "genwass_solution" || (kind.empty() && find_rows("curve"))) {
    columns = {"m", "rho", "f"};
    rows = find_rows("curve");
  } else if (kind == "trajectory" || (kind.empty() && find_rows("series"))) {
    columns = {"t", "mass"};
    rows = find_rows("series");
  } else {
    throw genwass::Error(genwass::ErrorCode::kSchemaViolation,
                         "unrecognized report kind \"" + kind + "\"");
  }
  std::ostringstream os;
  for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  if (rows && rows->is_array()) {
    for (const Json& row : *rows) {
      for (size_t i = 0; i < columns.size(); ++i) {
        os << (i ? "," : "") << (row.contains(columns[i]) ? cell(row[columns[i]]) : "nan");
      }
      os << '\n';
    }
  }
  emit(c, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized Wasserstein distances, flat metric duality and "
               "transport with source"};
  app.require_subcommand(1);
  Config c;

  auto* dist = app.add_subcommand("dist", "distance W_p^{a,b} between two measures");
  dist->add_option("mu", c.inputs, "measure files")->expected(2)->required();
  const Flags dist_flags = add_common(dist, c);

  auto* flat = app.add_subcommand("flat", "flat metric with witness potential");
  flat->add_option("mu", c.inputs, "measure files")->expected(2)->required();
  const Flags flat_flags = add_common(flat, c);

  auto* check = app.add_subcommand("check", "run a verification suite");
  check->add_option("suite", c.suite, "suite name")
      ->required()
      ->check(CLI::IsMember(genwass::suite_names()));
  const Flags check_flags = add_common(check, c);

  auto* geodesic = app.add_subcommand("geodesic", "constructive near-minimizer of the action");
  geodesic->add_option("mu", c.inputs, "measure files")->expected(2)->required();
  const Flags geodesic_flags = add_common(geodesic, c);

  auto* simulate = app.add_subcommand("simulate", "transport with source for a scenario");
  simulate->add_option("scenario", c.inputs, "scenario file")->expected(1)->required();
  simulate->add_option("--scheme", c.scheme, "duhamel or sah")
      ->check(CLI::IsMember({"duhamel", "sah"}));
  const Flags simulate_flags = add_common(simulate, c);

  auto* plotdata = app.add_subcommand("plotdata", "CSV series from a report");
  plotdata->add_option("report", c.inputs, "report file")->expected(1)->required();
  const Flags plot_flags = add_common(plotdata, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (dist->parsed()) {
      apply_params_json(c, dist_flags);
      return cmd_dist(c);
    }
    if (flat->parsed()) {
      apply_params_json(c, flat_flags);
      return cmd_flat(c);
    }
    if (check->parsed()) {
      apply_params_json(c, check_flags);
      return cmd_check(c);
    }
    if (geodesic->parsed()) {
      apply_params_json(c, geodesic_flags);
      return cmd_geodesic(c);
    }
    if (simulate->parsed()) {
      apply_params_json(c, simulate_flags);
      return cmd_simulate(c);
    }
    apply_params_json(c, plot_flags);
    return cmd_plotdata(c);
  } catch (const genwass::Error& e) {
    std::cerr << "error (" << genwass::to_string(e.code()) << "): " << e.what() << '\n';
    return e.is_input_error() ? kExitInput : kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
