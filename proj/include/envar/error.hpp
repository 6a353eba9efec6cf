// Copyright 2026 The Envar Authors
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace envar {

enum class ErrorCode {
  NonSquare,
  NotHermitian,
  NotUnitary,
  ZeroMatrix,
  TooFewSamples,
  ShapeMismatch,
  NonFinite,
  NotNormalized,
  BadSubsystemIndex,
  NonOrthonormalBasis,
  LengthMismatch,
  NotTracePreserving,
  DimensionMismatch,
  BadProbabilities,
  ComplementNotTracePreserving,
  BadParam,
  NotAdmissible,
  NotPure,
  CompletionViolated,
  UnsupportedDimension,
  NotEnvariancePair,
  GapTooSmall,
  NotHermitianSample,
  NonUnitaryInput,
  ZeroProbabilityBranch,
  MalformedInput,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above. The
/// optional `value` holds the offending residual (or time, for GapTooSmall)
/// so callers can report it without parsing the message.
class EnvarError : public std::runtime_error {
 public:
  EnvarError(ErrorCode code, const std::string &what, double value = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

}  // namespace envar
