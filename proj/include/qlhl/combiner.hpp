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

// Combining independent secret keys (for example a QKD key and a KEM secret)
// with a Toeplitz extractor, either with a seed carved out of the keys
// themselves or with a public seed drawn afterwards.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qlhl/bits.hpp"
#include "qlhl/bounds.hpp"
#include "qlhl/entropy.hpp"
#include "qlhl/error.hpp"
#include "qlhl/extractor.hpp"
#include "qlhl/kv.hpp"

namespace qlhl {

struct KeyMaterial {
  BitString bits;
  SourceSpec spec;
};

enum class CombineMode { kPrivateSeed, kPublicSeed };

struct CombineRequest {
  /// Exactly two keys in private mode; two or more in public mode.
  std::vector<KeyMaterial> keys;
  Independence independence;
  CombineMode mode = CombineMode::kPrivateSeed;

  // Public mode only.
  BitString seed;
  SecurityLevel eps_seed = SecurityLevel::perfect();
  /// Caller's statement that the seed was drawn after every key existed.
  bool seed_after_keys = false;
  /// Optional public transcript appended to the input; carries no entropy.
  std::optional<BitString> transcript;

  SecurityLevel eps_hash;
  ThreatCase threat = ThreatCase::kNoReveal;
  /// Per-key residual entropy that must survive a reveal of the output.
  std::vector<double> lambdas;
  /// Index of the key the threat model treats as exposed, if any.
  std::optional<std::size_t> revealed_key;
  /// Defaults to the largest length the bound allows; may only lower it.
  std::optional<std::size_t> requested_len;
  /// Private mode: drop one bit of the longer key when the total is even.
  bool auto_truncate = false;
};

struct Residual {
  double remaining_hmin = 0;
  bool satisfied = false;
};

/// Entropy left in a key after the combined output is published.
inline Residual residual_after_reveal(const SourceSpec& spec, double output_len,
                                      double lambda_target) {
  return {std::max(0.0, spec.hmin() - output_len), output_len <= spec.hmin() - lambda_target};
}

struct CombineResult {
  BitString output;
  SourceSpec out_spec;
  BoundReport report;
  std::vector<Residual> residuals;
  std::size_t seed_len = 0;
  std::size_t input_len = 0;

  KvDoc to_kv() const {
    KvDoc kv;
    kv.set("output_len", output.size());
    kv.set("seed_len", seed_len);
    kv.set("input_len", input_len);
    kv.merge(report.to_kv(), "bound.");
    kv.merge(out_spec.to_kv(), "out.");
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      const auto p = "key" + std::to_string(i + 1) + ".";
      kv.set(p + "residual_hmin", residuals[i].remaining_hmin);
      kv.set(p + "residual_satisfied", residuals[i].satisfied);
    }
    return kv;
  }
};

/// A KEM secret modeled by its computational (HILL) entropy.
inline SourceSpec model_pqc_key(std::size_t length, SecurityLevel eps_pqc,
                                std::optional<double> hill_floor = std::nullopt,
                                std::string label = "pqc") {
  const double s2 = hill_floor.value_or(static_cast<double>(length));
  if (s2 > static_cast<double>(length) || s2 < 0) {
    throw Error(Errc::kRange, "HILL entropy must lie in [0, length]");
  }
  return SourceSpec(std::move(label), length, s2, eps_pqc, EntropyKind::kHill);
}

/// The conventional combiner, kept for comparison: k1 XOR k2.
inline BitString xor_combine_baseline(const BitString& key1, const BitString& key2) {
  if (key1.size() != key2.size()) throw Error(Errc::kLengthMismatch, "keys differ in length");
  return key1 ^ key2;
}

/// With the xor output and key2 revealed, key1 is determined: no entropy left.
inline Residual xor_residual_after_reveal(const SourceSpec& key1, double lambda_target) {
  (void)key1;
  return {0.0, lambda_target <= 0};
}

namespace detail {

inline double lambda_at(const CombineRequest& req, std::size_t i) {
  return i < req.lambdas.size() ? req.lambdas[i] : 0.0;
}

/// Output kind: the join over keys not declared exposed.
inline EntropyKind surviving_kind(const CombineRequest& req, bool reveal_case) {
  EntropyKind k = EntropyKind::kMinEntropy;
  for (std::size_t i = 0; i < req.keys.size(); ++i) {
    if (reveal_case && req.revealed_key == i) continue;
    k = join(k, req.keys[i].spec.kind());
  }
  return k;
}

inline void check_keys(const CombineRequest& req) {
  for (const auto& key : req.keys) {
    if (key.bits.size() != key.spec.length()) {
      throw Error(Errc::kLengthMismatch, "key '" + key.spec.label() + "' bits do not match its spec");
    }
  }
  if (req.revealed_key && *req.revealed_key >= req.keys.size()) {
    throw Error(Errc::kRange, "revealed key index out of range");
  }
  // Throws unless the caller vouched for every key's independence.
  SourceSpec acc = req.keys.front().spec;
  for (std::size_t i = 1; i < req.keys.size(); ++i) {
    acc = concat_sources(acc, req.keys[i].spec, req.independence);
  }
}

inline std::size_t pick_length(const CombineRequest& req, const BoundReport& r) {
  if (!r.feasible || r.max_output_len < 1) {
    const double want = static_cast<double>(req.requested_len.value_or(1));
    const double raw = r.term("raw_bound");
    throw InfeasibleError("bound admits no output (raw " + format_double(raw) + " bits)",
                          std::max(1.0, std::ceil(want - raw)));
  }
  const auto cap = static_cast<std::size_t>(r.max_output_len);
  if (req.requested_len && *req.requested_len == 0) {
    throw Error(Errc::kInvalidArgument, "requested output length must be at least 1");
  }
  return std::min(req.requested_len.value_or(cap), cap);
}

}  // namespace detail

/// Private seed: the leading alpha share of each key forms the seed and the
/// remaining shares form the input, so |seed| = |input| - 1.
inline CombineResult combine_private(CombineRequest req) {
  if (req.mode != CombineMode::kPrivateSeed) throw Error(Errc::kInvalidArgument, "not a private-seed request");
  if (req.keys.size() != 2) throw Error(Errc::kInvalidArgument, "private-seed mode combines exactly two keys");
  detail::check_keys(req);

  auto& k1 = req.keys[0];
  auto& k2 = req.keys[1];
  if ((k1.bits.size() + k2.bits.size()) % 2 == 0 && req.auto_truncate) {
    auto& longer = k1.bits.size() > k2.bits.size() ? k1 : k2;
    longer.bits = truncate(longer.bits, 1);
    longer.spec = truncate_source(longer.spec, 1);
  }
  const auto part = alpha_partition(k1.bits.size(), k2.bits.size());
  const std::size_t a1 = static_cast<std::size_t>(part.alpha_num * k1.bits.size() / part.alpha_den);
  const std::size_t a2 = part.seed_len - a1;

  const bool reveal_case = req.threat == ThreatCase::kRevealedKey ||
                           req.threat == ThreatCase::kRevealOutputAndKey;
  const EntropyKind kind = detail::surviving_kind(req, reveal_case);
  auto report = combine_case_bound(req.threat, static_cast<double>(k1.spec.length()),
                                   static_cast<double>(k2.spec.length()), k1.spec.eps(),
                                   k2.spec.eps(), req.eps_hash, detail::lambda_at(req, 0),
                                   detail::lambda_at(req, 1), kind);
  // Keys below full entropy lose at most their deficit from seed plus input.
  const double deficit = (static_cast<double>(k1.spec.length()) - k1.spec.hmin()) +
                         (static_cast<double>(k2.spec.length()) - k2.spec.hmin());
  if (deficit > 0) {
    auto terms = report.terms;
    std::erase_if(terms, [](const auto& t) { return t.first == "raw_bound" || t.first == "floor_applied"; });
    terms.emplace_back("entropy_deficit", deficit);
    const bool forced_off = req.threat == ThreatCase::kControlledKey && !report.feasible;
    report = detail::finish_bound(report.term("raw_bound") - deficit, report.out_eps, kind,
                                  std::move(terms));
    if (forced_off) {
      report.feasible = false;
      report.max_output_len = -1;
    }
  }
  const std::size_t out_len = detail::pick_length(req, report);

  const BitString seed = concat(k1.bits.slice(0, a1), k2.bits.slice(0, a2));
  const BitString input = concat(k1.bits.slice(a1, k1.bits.size() - a1),
                                 k2.bits.slice(a2, k2.bits.size() - a2));
  const SeededHash h(ExtractorParams::modified(input.size(), out_len), seed);

  CombineResult res;
  res.output = extract_fast(h, input);
  res.out_spec = SourceSpec::secure("combined", out_len, report.out_eps, kind);
  res.report = std::move(report);
  res.seed_len = seed.size();
  res.input_len = input.size();
  for (std::size_t i = 0; i < 2; ++i) {
    res.residuals.push_back(residual_after_reveal(req.keys[i].spec, static_cast<double>(out_len),
                                                  detail::lambda_at(req, i)));
  }
  return res;
}

/// Public seed over key1 || key2 || ... (|| transcript).
inline CombineResult combine_public(const CombineRequest& req) {
  if (req.mode != CombineMode::kPublicSeed) throw Error(Errc::kInvalidArgument, "not a public-seed request");
  if (req.keys.size() < 2) throw Error(Errc::kInvalidArgument, "public-seed mode needs two or more keys");
  if (!req.seed_after_keys) {
    throw Error(Errc::kOrderingViolation, "the public seed must be drawn after all keys exist");
  }
  detail::check_keys(req);

  BitString input;
  for (const auto& k : req.keys) input.append(k.bits);
  if (req.transcript) input.append(*req.transcript);
  if (req.seed.size() + 1 != input.size()) {
    throw Error(Errc::kSeedSizeMismatch, "seed has " + std::to_string(req.seed.size()) +
                                             " bits, input needs " +
                                             std::to_string(input.size() - 1));
  }

  // Any key-exposing threat leaves, in the worst case, only the weakest key.
  const bool reveal = req.threat != ThreatCase::kNoReveal && req.threat != ThreatCase::kRevealOutput;
  const EntropyKind kind = detail::surviving_kind(req, reveal);
  double total = 0;
  double weakest = INFINITY;
  SecurityLevel eps = req.eps_seed + req.eps_hash;
  for (const auto& k : req.keys) {
    total += k.spec.hmin();
    weakest = std::min(weakest, k.spec.hmin());
    eps = eps + k.spec.eps();
  }
  const double pen = 2.0 * req.eps_hash.neg_log2();
  const double usable = reveal ? weakest : total;
  double raw = usable - pen + 2;
  std::vector<std::pair<std::string, double>> terms = {
      {"usable_entropy", usable}, {"hash_penalty_bits", pen}, {"constant_2", 2.0},
      {"transcript_bits", req.transcript ? static_cast<double>(req.transcript->size()) : 0.0}};
  if (req.threat == ThreatCase::kRevealOutput || req.threat == ThreatCase::kRevealOutputAndKey) {
    for (std::size_t i = 0; i < req.keys.size(); ++i) {
      const double cap = req.keys[i].spec.hmin() - detail::lambda_at(req, i);
      terms.emplace_back("residual_cap" + std::to_string(i + 1), cap);
      raw = std::min(raw, cap);
    }
  }
  auto report = detail::finish_bound(raw, eps, kind, std::move(terms));
  const std::size_t out_len = detail::pick_length(req, report);
  if (out_len > input.size()) throw Error(Errc::kRange, "output cannot exceed the input length");
  const SeededHash h(ExtractorParams::modified(input.size(), out_len), req.seed);

  CombineResult res;
  res.output = extract_fast(h, input);
  res.out_spec = SourceSpec::secure("combined", out_len, report.out_eps, kind);
  res.report = std::move(report);
  res.seed_len = req.seed.size();
  res.input_len = input.size();
  for (std::size_t i = 0; i < req.keys.size(); ++i) {
    res.residuals.push_back(residual_after_reveal(req.keys[i].spec, static_cast<double>(out_len),
                                                  detail::lambda_at(req, i)));
  }
  return res;
}

inline CombineResult combine(const CombineRequest& req) {
  return req.mode == CombineMode::kPrivateSeed ? combine_private(req) : combine_public(req);
}

}  // namespace qlhl
