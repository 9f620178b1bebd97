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

// Seeding an extractor from two independent weak random sources: one source
// is truncated to serve as the Toeplitz seed for the other.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qlhl/bits.hpp"
#include "qlhl/bounds.hpp"
#include "qlhl/entropy.hpp"
#include "qlhl/error.hpp"
#include "qlhl/extractor.hpp"
#include "qlhl/kv.hpp"

namespace qlhl {

// ---------------------------------------------------------------------------
// Simulated weak sources

enum class WeakModel { kFlatK, kBiasedIid, kInjected };

inline const char* weak_model_name(WeakModel m) {
  switch (m) {
    case WeakModel::kFlatK: return "flat";
    case WeakModel::kBiasedIid: return "biased";
    case WeakModel::kInjected: return "injected";
  }
  return "?";
}

inline WeakModel parse_weak_model(std::string_view s) {
  if (s == "flat") return WeakModel::kFlatK;
  if (s == "biased") return WeakModel::kBiasedIid;
  if (s == "injected") return WeakModel::kInjected;
  throw Error(Errc::kInvalidArgument, "unknown weak source model '" + std::string(s) + "'");
}

struct WeakSourceSim {
  std::size_t length = 0;
  double hmin_declared = 0;
  WeakModel model = WeakModel::kFlatK;
  /// Probability of a 1 bit (biased model).
  double bias = 0.5;
  /// Probability of each string, indexed MSB first (injected model).
  std::vector<double> table;
  std::uint64_t rng_seed = 0;

  /// Min-entropy of the model itself.
  double true_hmin() const {
    switch (model) {
      case WeakModel::kFlatK:
        return hmin_declared;
      case WeakModel::kBiasedIid:
        return -static_cast<double>(length) * std::log2(std::max(bias, 1 - bias));
      case WeakModel::kInjected:
        return -std::log2(*std::max_element(table.begin(), table.end()));
    }
    return 0;
  }

  void validate() const {
    if (hmin_declared < 0 || hmin_declared > static_cast<double>(length)) {
      throw Error(Errc::kInvalidArgument, "declared entropy must lie in [0, length]");
    }
    switch (model) {
      case WeakModel::kFlatK:
        if (hmin_declared != std::floor(hmin_declared)) {
          throw Error(Errc::kInvalidArgument, "flat source needs an integral entropy");
        }
        break;
      case WeakModel::kBiasedIid:
        if (!(bias > 0 && bias < 1)) throw Error(Errc::kInvalidArgument, "bias must lie in (0, 1)");
        break;
      case WeakModel::kInjected: {
        if (length > 20 || table.size() != (std::size_t{1} << length)) {
          throw Error(Errc::kInvalidArgument, "injected table needs 2^length entries, length <= 20");
        }
        double total = 0;
        for (double v : table) {
          if (!(v >= 0)) throw Error(Errc::kInvalidArgument, "negative probability in table");
          total += v;
        }
        if (std::fabs(total - 1) > 1e-12) throw Error(Errc::kInvalidArgument, "table does not sum to 1");
        break;
      }
    }
    if (model != WeakModel::kFlatK && hmin_declared > true_hmin() + 1e-9) {
      throw Error(Errc::kInvalidArgument, "declared entropy exceeds the model's min-entropy");
    }
  }

  SourceSpec spec(std::string label) const {
    return SourceSpec(std::move(label), length, hmin_declared);
  }
};

/// Stateful sampler; successive samples continue one generator stream.
class WeakSourceSampler {
 public:
  explicit WeakSourceSampler(WeakSourceSim sim) : sim_(std::move(sim)), gen_(sim_.rng_seed) {
    sim_.validate();
  }

  BitString next() {
    switch (sim_.model) {
      case WeakModel::kFlatK: {
        // The 2^k strings whose leading length - k bits are zero.
        const auto k = static_cast<std::size_t>(sim_.hmin_declared);
        return concat(BitString(sim_.length - k), BitString::random(k, gen_));
      }
      case WeakModel::kBiasedIid: {
        BitString out(sim_.length);
        for (std::size_t i = 0; i < sim_.length; ++i) {
          if (unit() < sim_.bias) out.set(i, true);
        }
        return out;
      }
      case WeakModel::kInjected: {
        const double u = unit();
        double acc = 0;
        std::size_t pick = sim_.table.size() - 1;
        for (std::size_t i = 0; i < sim_.table.size(); ++i) {
          acc += sim_.table[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
        return BitString::from_uint(pick, sim_.length);
      }
    }
    throw Error(Errc::kInvalidArgument, "unknown model");
  }

 private:
  /// Uniform double in [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  WeakSourceSim sim_;
  std::mt19937_64 gen_;
};

inline BitString sample_weak_source(const WeakSourceSim& sim) {
  return WeakSourceSampler(sim).next();
}

// ---------------------------------------------------------------------------
// Planning and running

/// kAuto keeps x2 as the seed unless it is too short to cover x1, in which
/// case the longer x1 takes the seed role.
enum class SeedChoice { kAuto, kX1, kX2 };

struct BootstrapPlan {
  SourceSpec x1_spec;
  SourceSpec x2_spec;
  /// True when x1 supplies the seed and x2 the input.
  bool x1_is_seed = false;
  std::size_t output_len = 0;
  SecurityLevel eps_hash;
  std::size_t truncation = 0;
  ExtractorParams params;
  /// Entropy surplus of the feasibility inequality, in bits.
  double slack_bits = 0;
  SourceSpec out_spec;

  const SourceSpec& input_spec() const { return x1_is_seed ? x2_spec : x1_spec; }
  const SourceSpec& seed_spec() const { return x1_is_seed ? x1_spec : x2_spec; }

  /// Realized seed-to-input length ratio before truncation.
  double seed_ratio() const {
    return static_cast<double>(seed_spec().length()) / static_cast<double>(input_spec().length());
  }

  KvDoc to_kv() const {
    KvDoc kv;
    kv.merge(x1_spec.to_kv(), "x1.");
    kv.merge(x2_spec.to_kv(), "x2.");
    kv.set("seed_source", x1_is_seed ? "x1" : "x2");
    kv.set("output_len", output_len);
    kv.set("eps_hash_neg_log2", eps_hash.neg_log2());
    kv.set("truncation", truncation);
    kv.set("input_len", params.input_len);
    kv.set("seed_len", params.seed_len);
    kv.set("seed_ratio", seed_ratio());
    kv.set("slack_bits", slack_bits);
    kv.set("out_eps_neg_log2", out_spec.eps().neg_log2());
    kv.set("out_kind", kind_name(out_spec.kind()));
    return kv;
  }
};

namespace detail {

inline SourceSpec prefixed_spec(const KvDoc& kv, const std::string& prefix) {
  KvDoc sub;
  for (const auto& [k, v] : kv.entries()) {
    if (k.starts_with(prefix)) sub.set(k.substr(prefix.size()), v);
  }
  return SourceSpec::from_kv(sub);
}

}  // namespace detail

/// Checks geometry and the entropy inequality
///   H(input) + H(seed) >= A + |seed source| + 2 log(1/eps) - 2,
/// evaluated before truncation (the truncated bits cancel on both sides).
inline BootstrapPlan plan_bootstrap(const SourceSpec& x1, const SourceSpec& x2, std::size_t out_len,
                                    SecurityLevel eps_hash, const Independence& ind,
                                    SeedChoice choice = SeedChoice::kAuto) {
  for (const auto* s : {&x1, &x2}) {
    for (const auto& c : s->components()) {
      if (!ind.covers(c)) {
        throw Error(Errc::kIndependenceNotAsserted, "no independence claim covers '" + c + "'");
      }
    }
  }
  BootstrapPlan plan;
  plan.x1_spec = x1;
  plan.x2_spec = x2;
  plan.x1_is_seed = choice == SeedChoice::kX1 ||
                    (choice == SeedChoice::kAuto && x1.length() > x2.length() + 1);
  plan.output_len = out_len;
  plan.eps_hash = eps_hash;
  const SourceSpec& in = plan.input_spec();
  const SourceSpec& seed = plan.seed_spec();
  if (out_len < 1 || out_len > in.length()) {
    throw Error(Errc::kInvalidArgument, "output length must lie in [1, input length]");
  }
  if (seed.length() + 1 < in.length()) {
    throw Error(Errc::kInsufficientSeedMaterial,
                "seed source has " + std::to_string(seed.length()) + " bits, needs at least " +
                    std::to_string(in.length() - 1));
  }
  plan.truncation = seed.length() + 1 - in.length();
  const double have = in.hmin() + seed.hmin();
  const double need = static_cast<double>(out_len) + static_cast<double>(seed.length()) +
                      required_hmin(0, eps_hash);
  plan.slack_bits = have - need;
  if (have < need) {
    throw InfeasibleError("entropy short by " + format_double(std::ceil(need - have)) +
                              " bits; resample both sources",
                          std::ceil(need - have));
  }
  plan.params = ExtractorParams::modified(in.length(), out_len);
  plan.out_spec = SourceSpec::secure("bootstrap", out_len, eps_hash + in.eps() + seed.eps(),
                                     join(in.kind(), seed.kind()));
  return plan;
}

/// Rebuilds a plan from its report. Loading a plan file restates the
/// independence of its two sources.
inline BootstrapPlan plan_from_kv(const KvDoc& kv) {
  const auto x1 = detail::prefixed_spec(kv, "x1.");
  const auto x2 = detail::prefixed_spec(kv, "x2.");
  const auto& who = kv.get("seed_source");
  if (who != "x1" && who != "x2") throw Error(Errc::kFormat, "seed_source must be x1 or x2");
  return plan_bootstrap(x1, x2, kv.get_uint("output_len"),
                        SecurityLevel::from_neg_log2(kv.get_double("eps_hash_neg_log2")),
                        Independence::assert_mutual({x1.label(), x2.label()}),
                        who == "x1" ? SeedChoice::kX1 : SeedChoice::kX2);
}

struct BootstrapResult {
  BitString output;
  SourceSpec out_spec;
};

inline BootstrapResult run_bootstrap(const BootstrapPlan& plan, const BitString& x1_bits,
                                     const BitString& x2_bits) {
  if (x1_bits.size() != plan.x1_spec.length() || x2_bits.size() != plan.x2_spec.length()) {
    throw Error(Errc::kLengthMismatch, "source bits do not match the planned lengths");
  }
  const BitString& input = plan.x1_is_seed ? x2_bits : x1_bits;
  const BitString& seed_src = plan.x1_is_seed ? x1_bits : x2_bits;
  const SeededHash h(plan.params, truncate(seed_src, plan.truncation));
  return {extract_fast(h, input), plan.out_spec};
}

}  // namespace qlhl
