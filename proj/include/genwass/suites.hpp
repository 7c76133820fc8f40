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
// Seeded property sweeps behind `genwass check <suite>`.

#ifndef GENWASS_SUITES_HPP_
#define GENWASS_SUITES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "genwass/genwass.hpp"
#include "genwass/io.hpp"

namespace genwass {

struct SuiteOptions {
  std::uint64_t seed = 1;
  int n = 20;
  GenWassParams params;  // a, b; p where the suite uses it
  int k = 0;             // 0 picks the suite default
};

struct SuiteReport {
  std::string suite;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest residual, meaning depends on the suite
  std::vector<std::string> failure_details;
  io::Json details = io::Json::object();
  bool passed() const { return failures == 0; }
};

// metric, duality, flows, gbb, sah, split, kr.
const std::vector<std::string>& suite_names();
// Throws kInvalidParameter for an unknown suite name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);
io::Json suite_to_json(const SuiteReport& r, const SuiteOptions& options);

// Registry fields on R^2 used by the flow sweep.
std::vector<VectorFieldSpec> registry_fields();

// Standard sample-and-hold scenario: unit atom at (1, 0), source
// +0.5 delta_(0, 0.8) on [0, 1], rotation with omega = 1 on |x| <= 1.5.
io::Scenario standard_scenario();

}  // namespace genwass

#endif  // GENWASS_SUITES_HPP_
