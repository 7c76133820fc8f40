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

#include "genwass/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "genwass/error.hpp"

namespace genwass::io {

namespace {

[[noreturn]] void schema(const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, what);
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) schema(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number()) schema(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

Point vector_of(const Json& v, const char* what) {
  if (!v.is_array()) schema(std::string(what) + " must be an array of numbers");
  Point x(static_cast<Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schema(std::string(what) + " must be an array of numbers");
    x(static_cast<Index>(i)) = v[i].get<double>();
  }
  return x;
}

Json vector_json(const Eigen::Ref<const Eigen::VectorXd>& x) {
  Json out = Json::array();
  for (Index i = 0; i < x.size(); ++i) out.push_back(x(i));
  return out;
}

template <typename M>
Json atoms_json(const M& m, bool is_signed) {
  Json out = Json::object();
  out["dim"] = m.dim();
  if (is_signed) out["signed"] = true;
  Json atoms = Json::array();
  for (Index i = 0; i < m.size(); ++i) {
    Json a = Json::object();
    a["x"] = vector_json(m.position(i));
    a["w"] = m.weight(i);
    atoms.push_back(std::move(a));
  }
  out["atoms"] = std::move(atoms);
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> atoms_from(const Json& j) {
  const Json& dim_json = member(j, "dim");
  if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1) {
    schema("\"dim\" must be a positive integer");
  }
  const Index dim = static_cast<Index>(dim_json.get<long long>());
  const Json& atoms = member(j, "atoms");
  if (!atoms.is_array()) schema("\"atoms\" must be an array");
  if (j.contains("signed") && !j["signed"].is_boolean()) {
    schema("\"signed\" must be a boolean");
  }
  Eigen::MatrixXd P(dim, static_cast<Index>(atoms.size()));
  Eigen::VectorXd w(static_cast<Index>(atoms.size()));
  for (size_t i = 0; i < atoms.size(); ++i) {
    const Point x = vector_of(member(atoms[i], "x"), "\"x\"");
    if (x.size() != dim) {
      std::ostringstream os;
      os << "atom " << i << " has " << x.size() << " coordinates but dim is " << dim;
      throw Error(ErrorCode::kDimensionMismatch, os.str());
    }
    P.col(static_cast<Index>(i)) = x;
    w(static_cast<Index>(i)) = number(atoms[i], "w");
  }
  return {P, w};
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  } catch (const nlohmann::json::out_of_range& e) {
    // Number literals beyond the double range.
    throw Error(ErrorCode::kNonFinite, e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Json measure_to_json(const DiscreteMeasure& m) { return atoms_json(m, false); }

Json signed_measure_to_json(const SignedDiscreteMeasure& m) {
  return atoms_json(m, true);
}

DiscreteMeasure measure_from_json(const Json& j) {
  auto [P, w] = atoms_from(j);
  for (Index i = 0; i < w.size(); ++i) {
    if (w(i) < 0.0) {
      std::ostringstream os;
      os << "atom " << i << " has negative weight " << format_double(w(i));
      throw Error(ErrorCode::kNegativeWeight, os.str());
    }
  }
  return DiscreteMeasure(std::move(P), std::move(w)).normalized();
}

SignedDiscreteMeasure signed_measure_from_json(const Json& j) {
  auto [P, w] = atoms_from(j);
  return SignedDiscreteMeasure(std::move(P), std::move(w)).normalized();
}

DiscreteMeasure parse_measure(std::string_view text) {
  return measure_from_json(parse_json(text));
}

std::string serialize_measure(const DiscreteMeasure& m) {
  return measure_to_json(m).dump();
}

DiscreteMeasure load_measure(const std::string& path) {
  return measure_from_json(read_json_file(path));
}

Json params_to_json(const GenWassParams& p) {
  return Json{{"a", p.a}, {"b", p.b}, {"p", p.p}};
}

GenWassParams params_from_json(const Json& j, GenWassParams base) {
  if (!j.is_object()) schema("parameters must be an object");
  base.a = number_or(j, "a", base.a);
  base.b = number_or(j, "b", base.b);
  base.p = number_or(j, "p", base.p);
  return base;
}

Json plan_to_json(const TransferencePlan& plan) {
  Json entries = Json::array();
  for (const PlanEntry& e : plan.entries()) {
    entries.push_back(Json{{"i", e.i}, {"j", e.j}, {"mass", e.mass}});
  }
  return Json{{"rows", plan.rows()}, {"cols", plan.cols()}, {"p", plan.p()}, {"entries", entries}};
}

Json potential_to_json(const PotentialSolution& f) {
  Json values = Json::array();
  for (Index i = 0; i < f.values.size(); ++i) {
    values.push_back(Json{{"x", vector_json(f.support.col(i))}, {"f", f.values(i)}});
  }
  return Json{{"objective", f.objective},
              {"box_violation", f.box_violation()},
              {"lipschitz_violation", f.lipschitz_violation()},
              {"values", values}};
}

Json solution_to_json(const GenWassSolution& s) {
  Json out = Json::object();
  out["kind"] = "genwass_solution";
  out["params"] = params_to_json(s.params);
  out["T"] = s.T;
  out["W"] = s.W;
  out["m_star"] = s.m_star;
  out["certified"] = s.certified;
  out["mass_mu"] = s.mass_mu;
  out["mass_nu"] = s.mass_nu;
  out["discarded"] = Json::array({s.discarded[0], s.discarded[1]});
  out["tilde_mu"] = measure_to_json(s.tilde_mu);
  out["tilde_nu"] = measure_to_json(s.tilde_nu);
  out["plan"] = plan_to_json(s.plan);
  Json curve = Json::array();
  for (size_t k = 0; k < s.curve.masses().size(); ++k) {
    const double m = s.curve.masses()[k];
    curve.push_back(Json{{"m", m},
                         {"rho", s.curve.costs()[k]},
                         {"f", outer_objective(s.curve, s.mass_mu, s.mass_nu,
                                               s.params, m)}});
  }
  out["curve"] = curve;
  return out;
}

Json flat_to_json(const FlatComparison& c) {
  return Json{{"kind", "flat"},
              {"flat", c.flat},
              {"W_1_11", c.genwass},
              {"difference", c.difference},
              {"passed", c.passed()},
              {"potential", potential_to_json(c.potential)}};
}

// ---- fields ----------------------------------------------------------------

Json field_to_json(const VectorFieldSpec& f) {
  Json out = Json::object();
  out["kind"] = f.kind();
  if (const auto* b = std::get_if<ConstantField>(&f.base())) {
    out["c"] = vector_json(b->c);
  } else if (const auto* b = std::get_if<AffineField>(&f.base())) {
    Json rows = Json::array();
    for (Index r = 0; r < b->A.rows(); ++r) rows.push_back(vector_json(b->A.row(r).transpose()));
    out["A"] = rows;
    out["c"] = vector_json(b->c);
  } else if (const auto* b = std::get_if<RotationField>(&f.base())) {
    out["omega"] = b->omega;
  } else {
    const auto& g = std::get<GaussianGradientField>(f.base());
    out["amplitude"] = g.amplitude;
    out["width"] = g.width;
    out["center"] = vector_json(g.center);
  }
  if (f.scaling()) {
    out["time_scaling"] = Json{{"offset", f.scaling()->offset},
                               {"amplitude", f.scaling()->amplitude},
                               {"frequency", f.scaling()->frequency}};
  }
  out["R"] = f.window_radius();
  out["L"] = f.lipschitz();
  out["M"] = f.sup_norm();
  return out;
}

VectorFieldSpec field_from_json(const Json& j) {
  const Json& kind_json = member(j, "kind");
  if (!kind_json.is_string()) schema("\"kind\" must be a string");
  const std::string kind = kind_json.get<std::string>();
  const bool has_R = j.contains("R");
  const double R = number_or(j, "R", 1.0);
  VectorFieldSpec f;
  if (kind == "constant") {
    f = VectorFieldSpec::constant(vector_of(member(j, "c"), "\"c\""), R);
  } else if (kind == "affine") {
    const Json& rows = member(j, "A");
    if (!rows.is_array() || rows.empty()) schema("\"A\" must be a non-empty matrix");
    const Index n = static_cast<Index>(rows.size());
    Eigen::MatrixXd A(n, n);
    for (Index r = 0; r < n; ++r) {
      const Point row = vector_of(rows[static_cast<size_t>(r)], "rows of \"A\"");
      if (row.size() != n) {
        throw Error(ErrorCode::kDimensionMismatch, "\"A\" must be square");
      }
      A.row(r) = row.transpose();
    }
    const Point c = j.contains("c") ? vector_of(j["c"], "\"c\"") : Point(Point::Zero(n));
    f = VectorFieldSpec::affine(A, c, R);
  } else if (kind == "rotation") {
    f = VectorFieldSpec::rotation(number(j, "omega"), R);
  } else if (kind == "gaussian_gradient") {
    f = VectorFieldSpec::gaussian_gradient(number(j, "amplitude"), number(j, "width"),
                                           vector_of(member(j, "center"), "\"center\""));
    if (has_R) f = VectorFieldSpec(f.base(), R);
  } else {
    schema("unknown field kind \"" + kind + "\"");
  }
  if (j.contains("time_scaling")) {
    const Json& g = j["time_scaling"];
    f = f.time_scaled(TimeScaling{number_or(g, "offset", 1.0), number_or(g, "amplitude", 0.0),
                                  number_or(g, "frequency", 0.0)});
  }
  std::optional<double> L, M;
  if (j.contains("L")) L = number(j, "L");
  if (j.contains("M")) M = number(j, "M");
  return f.with_constants(L, M);
}

Json source_to_json(const SourceSpec& s) {
  Json pieces = Json::array();
  for (const SourcePiece& p : s.pieces()) {
    pieces.push_back(Json{{"t0", p.t0}, {"t1", p.t1}, {"rate", signed_measure_to_json(p.rate)}});
  }
  return Json{{"pieces", pieces}};
}

SourceSpec source_from_json(const Json& j, int dim) {
  const Json& pieces = member(j, "pieces");
  if (!pieces.is_array()) schema("\"pieces\" must be an array");
  if (pieces.empty()) return SourceSpec(dim);
  std::vector<SourcePiece> out;
  for (const Json& p : pieces) {
    out.push_back({number(p, "t0"), number(p, "t1"), signed_measure_from_json(member(p, "rate"))});
  }
  SourceSpec s(std::move(out));
  if (s.dim() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "source and measure dimensions differ");
  }
  return s;
}

Json scenario_to_json(const Scenario& s) {
  return Json{{"mu0", measure_to_json(s.mu0)},
              {"field", field_to_json(s.field)},
              {"source", source_to_json(s.source)}};
}

Scenario scenario_from_json(const Json& j) {
  DiscreteMeasure mu0 = measure_from_json(member(j, "mu0"));
  VectorFieldSpec field = j.contains("field") ? field_from_json(j["field"])
                                              : VectorFieldSpec::zero(mu0.dim());
  SourceSpec source = j.contains("source") ? source_from_json(j["source"], mu0.dim())
                                           : SourceSpec(mu0.dim());
  if (field.dim() != mu0.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "field and measure dimensions differ");
  }
  return {std::move(mu0), std::move(field), std::move(source)};
}

// ---- trajectories ----------------------------------------------------------

std::string trajectory_csv(const SourcedTrajectory& traj) {
  std::ostringstream os;
  const int d = traj.measures.empty() ? 1 : traj.measures.front().dim();
  os << "t,atom_id";
  for (int i = 0; i < d; ++i) os << ",x" << i;
  os << ",w\n";
  for (size_t k = 0; k < traj.measures.size(); ++k) {
    const DiscreteMeasure& m = traj.measures[k];
    for (Index i = 0; i < m.size(); ++i) {
      os << format_double(traj.times[k]) << ',' << i;
      for (int c = 0; c < d; ++c) os << ',' << format_double(m.positions()(c, i));
      os << ',' << format_double(m.weight(i)) << '\n';
    }
  }
  return os.str();
}

Json trajectory_summary(const SourcedTrajectory& traj, const GenWassParams& params) {
  Json out = Json::object();
  out["kind"] = "trajectory";
  GenWassParams p2 = params;
  p2.p = 2.0;
  out["B"] = action_functional(traj, p2);
  out["source_variation"] = traj.source_variation();
  out["kinetic"] = traj.kinetic(true);
  out["kinetic_physical"] = traj.kinetic(false);
  out["defect"] = traj.defect;
  out["positivity_violation"] = traj.positivity_violation;
  out["mass_balance_residual"] = traj.mass_balance_residual();
  Json series = Json::array();
  for (size_t k = 0; k < traj.measures.size(); ++k) {
    series.push_back(Json{{"t", traj.times[k]}, {"mass", total_mass(traj.measures[k])}});
  }
  out["series"] = series;
  return out;
}

}  // namespace genwass::io
