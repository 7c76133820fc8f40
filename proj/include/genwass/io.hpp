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
// JSON and CSV formats.
//
//   measure:  {"dim": 2, "atoms": [{"x": [0.0, 1.0], "w": 0.5}, ...]}
//             signed measures add "signed": true and allow negative "w".
//   field:    {"kind": "rotation", "omega": 1.0, "R": 1.5, "L": ..., "M": ...}
//             kinds: constant {"c"}, affine {"A", "c"}, rotation {"omega"},
//             gaussian_gradient {"amplitude", "width", "center"}; optional
//             "time_scaling": {"offset", "amplitude", "frequency"}.
//   source:   {"pieces": [{"t0": 0, "t1": 1, "rate": <signed measure>}]}
//   scenario: {"mu0": <measure>, "field": <field>, "source": <source>}
//
// Doubles are written in shortest round-trip form, so parse/serialize is
// bit exact.

#ifndef GENWASS_IO_HPP_
#define GENWASS_IO_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "genwass/dynamics.hpp"
#include "genwass/exact_ot.hpp"
#include "genwass/flat_dual.hpp"
#include "genwass/flows.hpp"
#include "genwass/genwass.hpp"
#include "genwass/measures.hpp"
#include "genwass/potential.hpp"

namespace genwass::io {

using Json = nlohmann::ordered_json;

// Throws kParseError on malformed text.
Json parse_json(std::string_view text);
// Throws kParseError when the file cannot be read or parsed.
Json read_json_file(const std::string& path);
std::string format_double(double x);

Json measure_to_json(const DiscreteMeasure& m);
Json signed_measure_to_json(const SignedDiscreteMeasure& m);
// Throws kSchemaViolation, kNegativeWeight, kDimensionMismatch or kNonFinite.
// The result is normalized (coincident atoms merged, zero weights dropped).
DiscreteMeasure measure_from_json(const Json& j);
SignedDiscreteMeasure signed_measure_from_json(const Json& j);
DiscreteMeasure parse_measure(std::string_view text);
std::string serialize_measure(const DiscreteMeasure& m);
DiscreteMeasure load_measure(const std::string& path);

Json params_to_json(const GenWassParams& p);
// Reads "a", "b", "p" where present, keeping `base` otherwise.
GenWassParams params_from_json(const Json& j, GenWassParams base = {});

Json plan_to_json(const TransferencePlan& plan);
Json potential_to_json(const PotentialSolution& f);
Json solution_to_json(const GenWassSolution& s);
Json flat_to_json(const FlatComparison& c);

Json field_to_json(const VectorFieldSpec& f);
VectorFieldSpec field_from_json(const Json& j);
Json source_to_json(const SourceSpec& s);
SourceSpec source_from_json(const Json& j, int dim);

struct Scenario {
  DiscreteMeasure mu0;
  VectorFieldSpec field;
  SourceSpec source;
};
Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

// Columns t, atom_id, x0..x{d-1}, w.
std::string trajectory_csv(const SourcedTrajectory& traj);
Json trajectory_summary(const SourcedTrajectory& traj, const GenWassParams& params);

}  // namespace genwass::io

#endif  // GENWASS_IO_HPP_
