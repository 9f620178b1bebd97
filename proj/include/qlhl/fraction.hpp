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

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "qlhl/error.hpp"

namespace qlhl {

/// Non-negative exact rational with 64-bit parts, always kept reduced.
/// Comparisons widen to 128 bits, so they never overflow.
class Fraction {
 public:
  constexpr Fraction() = default;
  constexpr Fraction(std::uint64_t num, std::uint64_t den = 1) : num_(num), den_(den) {
    if (den == 0) throw Error(Errc::kInvalidArgument, "zero denominator");
    const auto g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  constexpr std::uint64_t num() const noexcept { return num_; }
  constexpr std::uint64_t den() const noexcept { return den_; }
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend constexpr bool operator==(const Fraction& a, const Fraction& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) noexcept {
    using U = unsigned __int128;
    return U{a.num_} * b.den_ <=> U{b.num_} * a.den_;
  }

  /// this <= 2^-e exactly.
  constexpr bool at_most_pow2(unsigned e) const noexcept {
    using U = unsigned __int128;
    return num_ == 0 || (e < 64 && (U{num_} << e) <= U{den_});
  }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace qlhl
