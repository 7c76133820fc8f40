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

#ifndef GENWASS_ERROR_HPP_
#define GENWASS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace genwass {

enum class ErrorCode {
  kParseError,         // malformed JSON text
  kSchemaViolation,    // JSON is well formed but does not match the schema
  kNegativeWeight,     // negative mass in an unsigned measure
  kDimensionMismatch,  // atoms or measures of different ambient dimension
  kNonFinite,          // NaN or inf coordinates / weights
  kUnequalMass,        // classical transport requested between unequal masses
  kInvalidParameter,   // a, b, p, k or tolerances out of range
  kPrecondition,       // operation-specific precondition violated
  kIntegrationFailure, // ODE step underflow
  kSolverFailure,      // LP / flow solver did not reach optimality
  kUnevaluable,        // functional cannot be evaluated on the given data
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for errors caused by user input rather than solver internals.
  bool is_input_error() const noexcept {
    switch (code_) {
      case ErrorCode::kParseError:
      case ErrorCode::kSchemaViolation:
      case ErrorCode::kNegativeWeight:
      case ErrorCode::kDimensionMismatch:
      case ErrorCode::kNonFinite:
      case ErrorCode::kUnequalMass:
      case ErrorCode::kInvalidParameter:
      case ErrorCode::kPrecondition:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace genwass

#endif  // GENWASS_ERROR_HPP_
