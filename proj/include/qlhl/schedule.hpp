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

// Extractor-based key schedule for the four-stage handshake and the QKD key
// budget it implies.
//
//   stage 1: k_pq || k_qkd || k_SecState || label_3 || traffic_1 -> k1, IHTS, RHTS
//   stage 2: k1 || k_pqI || label_5 || traffic_2                 -> k2, IAHTS, RAHTS
//   stage 3: k2 || k_pqR || label_7 || traffic_3                 -> k3, fk_I, fk_R
//   stage 4: k3 || label_8 || traffic_5                          -> IATS, RATS, SecState'
//
// Only QKD-derived material counts as entropy, so every stage loses
// 2 floor(log(1/eps')) - 2 bits and the chain is solved back to front.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qlhl/bits.hpp"
#include "qlhl/bounds.hpp"
#include "qlhl/combiner.hpp"
#include "qlhl/entropy.hpp"
#include "qlhl/error.hpp"
#include "qlhl/extractor.hpp"
#include "qlhl/kv.hpp"

namespace qlhl {

inline constexpr std::size_t kLabelBits = 64;

/// label_i: the ASCII bytes "QLHL/Li" followed by a NUL, as 64 bits.
inline BitString schedule_label(int i) {
  if (i < 1 || i > 8) throw Error(Errc::kRange, "labels are numbered 1..8");
  const std::string text = "QLHL/L" + std::to_string(i);
  std::array<std::uint8_t, 8> bytes{};
  std::copy(text.begin(), text.end(), bytes.begin());
  return BitString::from_bytes(bytes, kLabelBits);
}

/// Lengths of the nine derived keys.
struct KeyLengths {
  std::size_t iats = 0;
  std::size_t rats = 0;
  std::size_t sec_state = 0;
  std::size_t fk_i = 0;
  std::size_t fk_r = 0;
  std::size_t iahts = 0;
  std::size_t rahts = 0;
  std::size_t ihts = 0;
  std::size_t rhts = 0;

  static KeyLengths uniform(std::size_t n) { return {n, n, n, n, n, n, n, n, n}; }

  std::array<std::size_t, 9> as_array() const {
    return {iats, rats, sec_state, fk_i, fk_r, iahts, rahts, ihts, rhts};
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (auto v : as_array()) t += v;
    return t;
  }
};

struct ScheduleParams {
  KeyLengths lengths;
  SecurityLevel eps_prime;
  /// 2 floor(log2(1/eps')) - 2, paid by each of the four extractions.
  std::size_t stage_overhead = 0;
  std::size_t k3 = 0;
  std::size_t k2 = 0;
  std::size_t k1 = 0;
  std::size_t qkd_budget = 0;
  /// Filled in once the traffic layout is known; zero until then.
  std::array<std::size_t, 4> seed_lens{};

  KvDoc to_kv() const {
    KvDoc kv;
    static constexpr std::array<const char*, 9> kNames = {
        "len.iats", "len.rats", "len.sec_state", "len.fk_i", "len.fk_r",
        "len.iahts", "len.rahts", "len.ihts", "len.rhts"};
    const auto l = lengths.as_array();
    for (std::size_t i = 0; i < 9; ++i) kv.set(kNames[i], l[i]);
    kv.set("eps_prime", eps_prime.to_string());
    kv.set("stage_overhead", stage_overhead);
    kv.set("k3", k3);
    kv.set("k2", k2);
    kv.set("k1", k1);
    kv.set("qkd_budget", qkd_budget);
    for (std::size_t i = 0; i < 4; ++i) {
      if (seed_lens[i] != 0) kv.set("seed_len." + std::to_string(i + 1), seed_lens[i]);
    }
    return kv;
  }
};

namespace detail {

inline std::size_t stage_overhead(SecurityLevel eps_prime) {
  if (eps_prime.is_perfect()) throw Error(Errc::kInvalidArgument, "eps' must be positive");
  if (eps_prime.neg_log2() < 1) throw Error(Errc::kInvalidArgument, "eps' must be at most 1/2");
  return 2 * static_cast<std::size_t>(eps_prime.floor_bits()) - 2;
}

}  // namespace detail

/// Back-substitutes the four stage inequalities from the final keys upward.
inline ScheduleParams budget(const KeyLengths& lengths, SecurityLevel eps_prime) {
  for (auto v : lengths.as_array()) {
    if (v < 1) throw Error(Errc::kInvalidArgument, "every derived key needs at least 1 bit");
  }
  ScheduleParams p;
  p.lengths = lengths;
  p.eps_prime = eps_prime;
  const std::size_t o = detail::stage_overhead(eps_prime);
  p.stage_overhead = o;
  p.k3 = lengths.iats + lengths.rats + lengths.sec_state + o;
  p.k2 = p.k3 + lengths.fk_i + lengths.fk_r + o;
  p.k1 = p.k2 + lengths.iahts + lengths.rahts + o;
  p.qkd_budget = p.k1 + lengths.ihts + lengths.rhts + o;
  return p;
}

inline ScheduleParams budget(std::size_t n, SecurityLevel eps_prime) {
  if (n < 1) throw Error(Errc::kInvalidArgument, "key length must be at least 1 bit");
  return budget(KeyLengths::uniform(n), eps_prime);
}

/// 9n - 8 + 8 floor(log2(1/eps')).
inline std::size_t budget_closed_form(std::size_t n, SecurityLevel eps_prime) {
  detail::stage_overhead(eps_prime);
  return 9 * n - 8 + 8 * static_cast<std::size_t>(eps_prime.floor_bits());
}

struct StageOutput {
  std::vector<BitString> keys;
  /// Joint spec of the concatenated outputs.
  SourceSpec spec;
  BoundReport bound;
};

/// One extraction: modified Toeplitz over keys || label || traffic, split in
/// the listed order. Label and traffic are public and carry no entropy; HILL
/// inputs are carried along but not counted.
inline StageOutput schedule_stage(int stage, std::span<const KeyMaterial> keys, const BitString& label,
                                  const BitString& traffic, const BitString& seed,
                                  SecurityLevel eps_seed, SecurityLevel eps_prime,
                                  std::span<const std::size_t> out_lens) {
  if (stage < 1 || stage > 4) throw Error(Errc::kRange, "stages are numbered 1..4");
  BitString input;
  double hmin = 0;
  SecurityLevel eps_in = SecurityLevel::perfect();
  for (const auto& k : keys) {
    if (k.bits.size() != k.spec.length()) {
      throw Error(Errc::kLengthMismatch, "key '" + k.spec.label() + "' does not match its spec");
    }
    input.append(k.bits);
    if (k.spec.kind() != EntropyKind::kHill) {
      hmin += k.spec.hmin();
      eps_in = eps_in + k.spec.eps();
    }
  }
  input.append(label);
  input.append(traffic);
  if (seed.size() + 1 != input.size()) {
    throw Error(Errc::kSeedSizeMismatch, "stage " + std::to_string(stage) + " seed has " +
                                             std::to_string(seed.size()) + " bits, input needs " +
                                             std::to_string(input.size() - 1));
  }
  std::size_t total = 0;
  for (auto l : out_lens) {
    if (l < 1) throw Error(Errc::kInvalidArgument, "stage outputs must be non-empty");
    total += l;
  }
  const double seed_len = static_cast<double>(seed.size());
  auto bound = qlhl_general(hmin, eps_in, seed_len, eps_seed, seed_len, eps_prime);
  if (!bound.admits(total)) {
    throw Error(Errc::kBudgetExceeded,
                "stage " + std::to_string(stage) + " asks for " + std::to_string(total) +
                    " bits, bound allows " + std::to_string(bound.max_output_len));
  }
  const auto out = extract_fast(SeededHash(ExtractorParams::modified(input.size(), total), seed), input);
  StageOutput r;
  std::size_t at = 0;
  for (auto l : out_lens) {
    r.keys.push_back(out.slice(at, l));
    at += l;
  }
  r.spec = SourceSpec::secure("stage" + std::to_string(stage), total, bound.out_eps);
  r.bound = std::move(bound);
  return r;
}

}  // namespace qlhl
