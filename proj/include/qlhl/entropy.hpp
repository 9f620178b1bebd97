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

// Entropy ledger: source descriptors and the algebra used to combine,
// split, truncate and leak them.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlhl/error.hpp"
#include "qlhl/kv.hpp"

namespace qlhl {

/// Distance from uniform, stored as -log2(eps). Infinity means eps = 0.
class SecurityLevel {
 public:
  /// eps = 1, the trivial level.
  constexpr SecurityLevel() = default;

  static SecurityLevel from_neg_log2(double v) {
    if (std::isnan(v) || v < 0) {
      throw Error(Errc::kRange, "neg_log2_eps must lie in [0, inf]");
    }
    SecurityLevel s;
    s.neg_log2_ = v;
    return s;
  }

  /// eps = 2^-bits.
  static SecurityLevel pow2(double bits) { return from_neg_log2(bits); }
  static SecurityLevel perfect() { return from_neg_log2(INFINITY); }

  static SecurityLevel from_eps(double eps) {
    if (std::isnan(eps) || eps < 0 || eps > 1) throw Error(Errc::kRange, "eps must lie in [0, 1]");
    return from_neg_log2(eps == 0 ? INFINITY : -std::log2(eps));
  }

  /// Accepts "2^-N", "inf", "0" (perfect) or a decimal eps such as "1e-9".
  static SecurityLevel parse(std::string_view text) {
    if (text == "inf") return perfect();
    if (text.starts_with("2^-")) return from_neg_log2(parse_double(text.substr(3)));
    if (text.starts_with("2^")) {
      const double e = parse_double(text.substr(2));
      if (e > 0) throw Error(Errc::kRange, "eps must not exceed 1");
      return from_neg_log2(-e);
    }
    return from_eps(parse_double(text));
  }

  double neg_log2() const noexcept { return neg_log2_; }
  double eps() const noexcept { return std::exp2(-neg_log2_); }
  bool is_perfect() const noexcept { return std::isinf(neg_log2_); }

  /// log2(1/eps) floored, as used by integer length formulas.
  double floor_bits() const noexcept { return std::floor(neg_log2_); }

  /// eps * 2^lambda, capped at 1.
  SecurityLevel scaled_pow2(double lambda) const {
    if (is_perfect()) return *this;
    return from_neg_log2(std::max(0.0, neg_log2_ - lambda));
  }

  /// "2^-N" when N is integral, "inf" for eps = 0, else the decimal exponent.
  std::string to_string() const {
    if (is_perfect()) return "inf";
    if (neg_log2_ == std::floor(neg_log2_) && neg_log2_ < 1e15) {
      return "2^-" + std::to_string(static_cast<long long>(neg_log2_));
    }
    return "2^-" + format_double(neg_log2_);
  }

  friend bool operator==(const SecurityLevel&, const SecurityLevel&) = default;

 private:
  double neg_log2_ = 0;
};

/// eps_a + eps_b, evaluated in the log domain. Results above 1 are capped.
inline SecurityLevel eps_add(const SecurityLevel& a, const SecurityLevel& b) {
  if (a.is_perfect()) return b;
  if (b.is_perfect()) return a;
  const double lo = std::min(a.neg_log2(), b.neg_log2());
  const double gap = std::fabs(a.neg_log2() - b.neg_log2());
  const double v = lo - std::log1p(std::exp2(-gap)) / std::log(2.0);
  return SecurityLevel::from_neg_log2(std::max(0.0, v));
}

inline SecurityLevel operator+(const SecurityLevel& a, const SecurityLevel& b) {
  return eps_add(a, b);
}

/// k * eps for a positive integer multiplier.
inline SecurityLevel eps_times(const SecurityLevel& a, unsigned k) {
  if (k == 0) return SecurityLevel::perfect();
  return a.scaled_pow2(std::log2(static_cast<double>(k)));
}

enum class EntropyKind { kMinEntropy, kSmoothMinEntropy, kHill };

/// Join in the kind lattice: min < smooth < HILL, so HILL absorbs.
inline EntropyKind join(EntropyKind a, EntropyKind b) { return std::max(a, b); }

inline const char* kind_name(EntropyKind k) {
  switch (k) {
    case EntropyKind::kMinEntropy: return "min";
    case EntropyKind::kSmoothMinEntropy: return "smooth";
    case EntropyKind::kHill: return "hill";
  }
  return "?";
}

inline EntropyKind parse_kind(std::string_view s) {
  if (s == "min") return EntropyKind::kMinEntropy;
  if (s == "smooth") return EntropyKind::kSmoothMinEntropy;
  if (s == "hill") return EntropyKind::kHill;
  throw Error(Errc::kFormat, "unknown entropy kind '" + std::string(s) + "'");
}

class Independence;

/// A (length, min-entropy, eps, kind) descriptor. `components` lists the
/// primitive sources the descriptor was built from; independence claims are
/// checked against it.
class SourceSpec {
 public:
  SourceSpec() = default;
  SourceSpec(std::string label, std::size_t length, double hmin,
             SecurityLevel eps = SecurityLevel::perfect(),
             EntropyKind kind = EntropyKind::kMinEntropy)
      : label_(std::move(label)), length_(length), hmin_(hmin), eps_(eps), kind_(kind) {
    if (std::isnan(hmin) || hmin < 0 || hmin > static_cast<double>(length)) {
      throw Error(Errc::kRange, "hmin must lie in [0, length] for source '" + label_ + "'");
    }
    components_ = {label_};
  }

  /// A secure source: full entropy, eps-close to uniform.
  static SourceSpec secure(std::string label, std::size_t length,
                           SecurityLevel eps = SecurityLevel::perfect(),
                           EntropyKind kind = EntropyKind::kMinEntropy) {
    return SourceSpec(std::move(label), length, static_cast<double>(length), eps, kind);
  }

  const std::string& label() const noexcept { return label_; }
  std::size_t length() const noexcept { return length_; }
  double hmin() const noexcept { return hmin_; }
  const SecurityLevel& eps() const noexcept { return eps_; }
  EntropyKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& components() const noexcept { return components_; }

  bool is_secure() const noexcept { return hmin_ == static_cast<double>(length_); }

  SourceSpec with_label(std::string label) const {
    SourceSpec s = *this;
    if (s.components_.size() == 1 && s.components_[0] == s.label_) s.components_ = {label};
    s.label_ = std::move(label);
    return s;
  }
  SourceSpec with_kind(EntropyKind kind) const {
    SourceSpec s = *this;
    s.kind_ = kind;
    return s;
  }
  /// Same source identity with a new length and entropy.
  SourceSpec resized(std::size_t length, double hmin) const {
    SourceSpec s(label_, length, hmin, eps_, kind_);
    s.components_ = components_;
    return s;
  }
  SourceSpec with_eps(SecurityLevel eps) const {
    SourceSpec s = *this;
    s.eps_ = eps;
    return s;
  }

  KvDoc to_kv() const {
    KvDoc kv;
    kv.set("label", label_);
    kv.set("length_bits", length_);
    kv.set("hmin_bits", hmin_);
    kv.set("neg_log2_eps", eps_.neg_log2());
    kv.set("kind", kind_name(kind_));
    return kv;
  }

  static SourceSpec from_kv(const KvDoc& kv) {
    return SourceSpec(kv.get("label"), kv.get_uint("length_bits"), kv.get_double("hmin_bits"),
                      SecurityLevel::from_neg_log2(kv.get_double("neg_log2_eps")),
                      parse_kind(kv.get("kind")));
  }

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;

 private:
  friend SourceSpec concat_sources(const SourceSpec&, const SourceSpec&, const Independence&);

  std::string label_;
  std::size_t length_ = 0;
  double hmin_ = 0;
  SecurityLevel eps_ = SecurityLevel::perfect();
  EntropyKind kind_ = EntropyKind::kMinEntropy;
  std::vector<std::string> components_;
};

/// Caller's claim that the named sources are mutually independent given the
/// adversary. The library cannot verify this; it only refuses to combine
/// sources nobody vouched for.
class Independence {
 public:
  static Independence assert_mutual(std::vector<std::string> labels) {
    Independence ind;
    ind.labels_.insert(labels.begin(), labels.end());
    if (ind.labels_.size() != labels.size()) {
      throw Error(Errc::kInvalidArgument, "independence claim repeats a label");
    }
    return ind;
  }

  bool covers(const std::string& label) const { return labels_.contains(label); }
  const std::set<std::string>& labels() const noexcept { return labels_; }

 private:
  std::set<std::string> labels_;
};

/// Concatenation of two independent sources: lengths, entropies and eps add.
inline SourceSpec concat_sources(const SourceSpec& a, const SourceSpec& b,
                                 const Independence& ind) {
  for (const auto* s : {&a, &b}) {
    for (const auto& c : s->components()) {
      if (!ind.covers(c)) {
        throw Error(Errc::kIndependenceNotAsserted,
                    "no independence claim covers source '" + c + "'");
      }
    }
  }
  for (const auto& c : a.components()) {
    if (std::find(b.components().begin(), b.components().end(), c) != b.components().end()) {
      throw Error(Errc::kIndependenceNotAsserted,
                  "source '" + c + "' appears on both sides of the concatenation");
    }
  }
  SourceSpec out(a.label() + "||" + b.label(), a.length() + b.length(), a.hmin() + b.hmin(),
                 eps_add(a.eps(), b.eps()), join(a.kind(), b.kind()));
  out.components_ = a.components();
  out.components_.insert(out.components_.end(), b.components().begin(), b.components().end());
  return out;
}

struct SecureSplit {
  SourceSpec head;
  SourceSpec tail;
  /// The two parts are independent at the parent's eps.
  Independence independence;
};

/// Splits a secure source into two secure, independent parts with the same eps.
inline SecureSplit split_secure(const SourceSpec& x, std::size_t at) {
  if (!x.is_secure()) {
    throw Error(Errc::kNotSecureSource, "only a full-entropy source can be split: '" + x.label() + "'");
  }
  if (at > x.length()) throw Error(Errc::kRange, "split point beyond source length");
  const std::string n = std::to_string(x.length());
  const std::string a = std::to_string(at);
  SourceSpec head = SourceSpec::secure(x.label() + "[0:" + a + ")", at, x.eps(), x.kind());
  SourceSpec tail = SourceSpec::secure(x.label() + "[" + a + ":" + n + ")", x.length() - at,
                                       x.eps(), x.kind());
  auto ind = Independence::assert_mutual({head.label(), tail.label()});
  return {std::move(head), std::move(tail), std::move(ind)};
}

/// Drops q trailing bits, assuming each one carried a full bit of entropy.
inline SourceSpec truncate_source(const SourceSpec& x, std::size_t q) {
  if (q > x.length()) throw Error(Errc::kRange, "cannot truncate more bits than the source has");
  return x.resized(x.length() - q, std::max(0.0, x.hmin() - static_cast<double>(q)));
}

/// Conditions on `bits_revealed` bits of side information.
inline SourceSpec leak(const SourceSpec& x, double bits_revealed) {
  if (bits_revealed < 0) throw Error(Errc::kRange, "revealed bit count must be non-negative");
  return x.resized(x.length(), std::max(0.0, x.hmin() - bits_revealed));
}

}  // namespace qlhl
