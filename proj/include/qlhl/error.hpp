// Copyright 2026 The qlhl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qlhl {

enum class Errc {
  kRange,
  kLengthMismatch,
  kInvalidArgument,
  kFormat,
  kParity,
  kGuardExceeded,
  kIndependenceNotAsserted,
  kNotSecureSource,
  kInfeasible,
  kInsufficientSeedMaterial,
  kOrderingViolation,
  kSeedSizeMismatch,
  kBudgetExceeded,
  kUnknownQkdId,
  kPadExhausted,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::kRange: return "Range";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kFormat: return "Format";
    case Errc::kParity: return "Parity";
    case Errc::kGuardExceeded: return "GuardExceeded";
    case Errc::kIndependenceNotAsserted: return "IndependenceNotAsserted";
    case Errc::kNotSecureSource: return "NotSecureSource";
    case Errc::kInfeasible: return "Infeasible";
    case Errc::kInsufficientSeedMaterial: return "InsufficientSeedMaterial";
    case Errc::kOrderingViolation: return "OrderingViolation";
    case Errc::kSeedSizeMismatch: return "SeedSizeMismatch";
    case Errc::kBudgetExceeded: return "BudgetExceeded";
    case Errc::kUnknownQkdId: return "UnknownQkdId";
    case Errc::kPadExhausted: return "PadExhausted";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised when an entropy budget cannot support the requested output.
/// `shortfall_bits` is how many more bits of min-entropy would be needed.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double shortfall_bits)
      : Error(Errc::kInfeasible, what), shortfall_bits_(shortfall_bits) {}

  double shortfall_bits() const noexcept { return shortfall_bits_; }

 private:
  double shortfall_bits_;
};

}  // namespace qlhl
