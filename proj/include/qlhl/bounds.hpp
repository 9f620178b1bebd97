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

// Output-length bounds from the leftover hash lemma and its variants.
//
// All logarithms are base 2 and exact; only the final length is floored.
// A negative final length is reported as -1 with feasible = false, and the
// raw real value is kept in the terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlhl/entropy.hpp"
#include "qlhl/error.hpp"
#include "qlhl/fraction.hpp"
#include "qlhl/kv.hpp"

namespace qlhl {

struct BoundReport {
  long long max_output_len = -1;
  bool feasible = false;
  SecurityLevel out_eps;
  EntropyKind kind = EntropyKind::kMinEntropy;
  /// Labeled additive terms plus the raw unfloored value.
  std::vector<std::pair<std::string, double>> terms;

  bool admits(std::size_t requested) const {
    return feasible && max_output_len >= static_cast<long long>(requested);
  }

  double term(std::string_view name) const {
    for (const auto& [k, v] : terms) {
      if (k == name) return v;
    }
    throw Error(Errc::kInvalidArgument, "no bound term named '" + std::string(name) + "'");
  }

  KvDoc to_kv() const {
    KvDoc kv;
    kv.set("max_output_len", max_output_len);
    kv.set("feasible", feasible);
    for (const auto& [k, v] : terms) kv.set(k, v);
    kv.set("out_eps_neg_log2", out_eps.neg_log2());
    kv.set("kind", kind_name(kind));
    return kv;
  }
};

namespace detail {

inline double hash_penalty(const SecurityLevel& eps_hash) { return 2.0 * eps_hash.neg_log2(); }

inline BoundReport finish_bound(double raw, SecurityLevel out_eps, EntropyKind kind,
                                std::vector<std::pair<std::string, double>> terms) {
  BoundReport r;
  const double fl = std::floor(raw);
  r.feasible = fl >= 0;
  r.max_output_len = r.feasible ? static_cast<long long>(fl) : -1;
  r.out_eps = out_eps;
  r.kind = kind;
  r.terms = std::move(terms);
  r.terms.emplace_back("raw_bound", raw);
  r.terms.emplace_back("floor_applied", r.feasible ? fl : -1.0);
  return r;
}

}  // namespace detail

/// hmin - 2 log(1/eps_hash) + 2, eps_smooth + eps_hash close.
inline BoundReport qlhl_basic(double hmin_input, SecurityLevel eps_smooth, SecurityLevel eps_hash,
                              EntropyKind kind = EntropyKind::kMinEntropy) {
  if (hmin_input < 0) throw Error(Errc::kRange, "hmin must be non-negative");
  const double pen = detail::hash_penalty(eps_hash);
  return detail::finish_bound(hmin_input - pen + 2, eps_smooth + eps_hash, kind,
                              {{"hmin_input", hmin_input},
                               {"seed_penalty", 0.0},
                               {"hash_penalty_bits", pen},
                               {"constant_2", 2.0}});
}

/// Weak seed handled by scaling the hash eps by 2^lambda: the deficiency is
/// paid twice in output length.
inline BoundReport qlhl_weak_seed_penalized(double hmin_input, SecurityLevel eps_smooth,
                                            double seed_len, double hmin_seed,
                                            SecurityLevel eps_target,
                                            EntropyKind kind = EntropyKind::kMinEntropy) {
  if (hmin_seed > seed_len || hmin_seed < 0) {
    throw Error(Errc::kRange, "seed entropy must lie in [0, seed length]");
  }
  const double seed_pen = 2.0 * (hmin_seed - seed_len);
  const double pen = detail::hash_penalty(eps_target);
  return detail::finish_bound(hmin_input + seed_pen - pen + 2, eps_smooth + eps_target, kind,
                              {{"hmin_input", hmin_input},
                               {"seed_penalty", seed_pen},
                               {"hash_penalty_bits", pen},
                               {"constant_2", 2.0}});
}

/// Smoothed input and smoothed weak seed; the deficiency is paid once.
inline BoundReport qlhl_general(double hmin_input, SecurityLevel eps_input, double hmin_seed,
                                SecurityLevel eps_seed, double seed_len, SecurityLevel eps_hash,
                                EntropyKind kind = EntropyKind::kMinEntropy) {
  if (hmin_seed > seed_len || hmin_seed < 0) {
    throw Error(Errc::kRange, "seed entropy must lie in [0, seed length]");
  }
  if (hmin_input < 0) throw Error(Errc::kRange, "hmin must be non-negative");
  const double seed_pen = hmin_seed - seed_len;
  const double pen = detail::hash_penalty(eps_hash);
  return detail::finish_bound(hmin_input + seed_pen - pen + 2, eps_input + eps_seed + eps_hash,
                              kind,
                              {{"hmin_input", hmin_input},
                               {"hmin_seed", hmin_seed},
                               {"seed_penalty", seed_pen},
                               {"hash_penalty_bits", pen},
                               {"constant_2", 2.0}});
}

/// Minimum input entropy for `out_len` bits at eps_hash.
inline double required_hmin(double out_len, SecurityLevel eps_hash) {
  return out_len + detail::hash_penalty(eps_hash) - 2;
}

enum class ThreatCase { kNoReveal, kControlledKey, kRevealedKey, kRevealOutput, kRevealOutputAndKey };

inline const char* threat_name(ThreatCase c) {
  switch (c) {
    case ThreatCase::kNoReveal: return "no-reveal";
    case ThreatCase::kControlledKey: return "controlled";
    case ThreatCase::kRevealedKey: return "revealed-key";
    case ThreatCase::kRevealOutput: return "reveal-output";
    case ThreatCase::kRevealOutputAndKey: return "reveal-both";
  }
  return "?";
}

inline ThreatCase parse_threat(std::string_view s) {
  for (auto c : {ThreatCase::kNoReveal, ThreatCase::kControlledKey, ThreatCase::kRevealedKey,
                 ThreatCase::kRevealOutput, ThreatCase::kRevealOutputAndKey}) {
    if (s == threat_name(c)) return c;
  }
  throw Error(Errc::kInvalidArgument, "unknown threat case '" + std::string(s) + "'");
}

/// Private-seed combining of two secure keys under a compromise case.
/// lambda1/lambda2 are the residual entropies each key must keep once the
/// output is revealed; they only matter for the reveal-output cases.
inline BoundReport combine_case_bound(ThreatCase c, double len1, double len2, SecurityLevel eps1,
                                      SecurityLevel eps2, SecurityLevel eps_hash,
                                      double lambda1 = 0, double lambda2 = 0,
                                      EntropyKind kind = EntropyKind::kMinEntropy) {
  if (len1 < 1 || len2 < 1) throw Error(Errc::kRange, "key lengths must be at least 1");
  if (lambda1 < 0 || lambda2 < 0) throw Error(Errc::kRange, "lambdas must be non-negative");
  const double pen = detail::hash_penalty(eps_hash);
  const double total = len1 + len2;
  const SecurityLevel out_eps = eps_times(eps1, 2) + eps_times(eps2, 2) + eps_hash;
  const double no_reveal = (total + 1) / 2 - pen + 2;
  std::vector<std::pair<std::string, double>> terms = {
      {"len1", len1}, {"len2", len2}, {"hash_penalty_bits", pen}, {"constant_2", 2.0}};

  switch (c) {
    case ThreatCase::kNoReveal:
      return detail::finish_bound(no_reveal, out_eps, kind, std::move(terms));
    case ThreatCase::kControlledKey: {
      // Whichever key the adversary controls leaves only the other one's
      // surplus in the seed-vs-input balance.
      const double x1_controlled = (len2 - len1 + 1) / 2 - pen + 2;
      const double x2_controlled = (len1 - len2 + 1) / 2 - pen + 2;
      terms.emplace_back("controlled_key1_only", x1_controlled);
      terms.emplace_back("controlled_key2_only", x2_controlled);
      terms.emplace_back("summed_constraints", x1_controlled + x2_controlled);
      auto r = detail::finish_bound(std::min(x1_controlled, x2_controlled), out_eps, kind,
                                    std::move(terms));
      if (eps_hash.neg_log2() > 1.25) {
        r.feasible = false;
        r.max_output_len = -1;
      }
      return r;
    }
    case ThreatCase::kRevealedKey: {
      const double keep2 = len2 + len2 / total;
      const double keep1 = len1 + len1 / total;
      terms.emplace_back("key1_revealed_half", keep2 / 2);
      terms.emplace_back("key2_revealed_half", keep1 / 2);
      return detail::finish_bound(std::min(keep1, keep2) / 2 - pen + 2, out_eps, kind,
                                  std::move(terms));
    }
    case ThreatCase::kRevealOutput:
    case ThreatCase::kRevealOutputAndKey: {
      const double cap1 = len1 - lambda1;
      const double cap2 = len2 - lambda2;
      terms.emplace_back("no_reveal_bound", no_reveal);
      terms.emplace_back("residual_cap1", cap1);
      terms.emplace_back("residual_cap2", cap2);
      return detail::finish_bound(std::min({no_reveal, cap1, cap2}), out_eps, kind,
                                  std::move(terms));
    }
  }
  throw Error(Errc::kInvalidArgument, "unknown threat case");
}

/// Public seed over the concatenation of both keys. With reveal allowed,
/// either key may be exposed afterwards, so only the shorter one counts.
inline BoundReport public_seed_bound(double len1, double len2, SecurityLevel eps1,
                                     SecurityLevel eps2, SecurityLevel eps_seed,
                                     SecurityLevel eps_hash, bool reveal_allowed,
                                     EntropyKind kind = EntropyKind::kMinEntropy) {
  if (len1 < 1 || len2 < 1) throw Error(Errc::kRange, "key lengths must be at least 1");
  const double pen = detail::hash_penalty(eps_hash);
  const double usable = reveal_allowed ? std::min(len1, len2) : len1 + len2;
  return detail::finish_bound(usable - pen + 2, eps1 + eps2 + eps_seed + eps_hash, kind,
                              {{"len1", len1},
                               {"len2", len2},
                               {"usable_entropy", usable},
                               {"hash_penalty_bits", pen},
                               {"constant_2", 2.0}});
}

struct AlphaPartition {
  /// alpha = alpha_num / alpha_den, kept unreduced: (T - 1) / (2T).
  std::uint64_t alpha_num = 0;
  std::uint64_t alpha_den = 1;
  std::size_t seed_len = 0;
  std::size_t input_len = 0;

  Fraction alpha() const { return Fraction(alpha_num, alpha_den); }
};

/// Seed/input split of an odd total length meeting seed = input - 1.
inline AlphaPartition alpha_partition(std::size_t len1, std::size_t len2) {
  const std::size_t total = len1 + len2;
  if (total < 2) throw Error(Errc::kRange, "combined length must be at least 2");
  if (total % 2 == 0) {
    throw Error(Errc::kParity, "combined length " + std::to_string(total) +
                                   " is even; drop one bit so seed = input - 1 is satisfiable");
  }
  return {total - 1, 2 * total, (total - 1) / 2, (total + 1) / 2};
}

}  // namespace qlhl
