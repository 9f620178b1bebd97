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

// Toeplitz hashing over GF(2).
//
// The modified family uses H_s = [T_s | I_m], an m x n matrix whose trailing
// m columns are the identity and whose leading n - m columns form a Toeplitz
// block T_s built from n - 1 seed bits:
//
//   T[i][0] = s[i]           for i < m          (first column)
//   T[0][j] = s[m - 1 + j]   for 0 < j < n - m  (rest of the first row)
//   T[i][j] = T[i - 1][j - 1]
//
// The regular family is a plain m x n Toeplitz matrix with the same
// indexing, using m + n - 1 seed bits.

#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qlhl/bits.hpp"
#include "qlhl/error.hpp"
#include "qlhl/fraction.hpp"

namespace qlhl {

enum class Family { kModifiedToeplitz, kRegularToeplitz };

inline const char* family_name(Family f) {
  return f == Family::kModifiedToeplitz ? "modified-toeplitz" : "regular-toeplitz";
}

inline Family parse_family(std::string_view s) {
  if (s == "modified-toeplitz" || s == "modified") return Family::kModifiedToeplitz;
  if (s == "regular-toeplitz" || s == "regular") return Family::kRegularToeplitz;
  throw Error(Errc::kInvalidArgument, "unknown extractor family '" + std::string(s) + "'");
}

struct ExtractorParams {
  std::size_t input_len = 0;
  std::size_t output_len = 0;
  std::size_t seed_len = 0;
  Family family = Family::kModifiedToeplitz;

  static ExtractorParams modified(std::size_t n, std::size_t m) {
    ExtractorParams p{n, m, n == 0 ? 0 : n - 1, Family::kModifiedToeplitz};
    p.validate();
    return p;
  }

  static ExtractorParams regular(std::size_t n, std::size_t m) {
    ExtractorParams p{n, m, m + n - 1, Family::kRegularToeplitz};
    p.validate();
    return p;
  }

  void validate() const {
    if (input_len < 1 || output_len < 1) {
      throw Error(Errc::kInvalidArgument, "input and output lengths must be at least 1");
    }
    if (family == Family::kModifiedToeplitz) {
      if (output_len > input_len) {
        throw Error(Errc::kInvalidArgument, "modified Toeplitz output cannot exceed its input");
      }
      if (seed_len != input_len - 1) {
        throw Error(Errc::kSeedSizeMismatch, "modified Toeplitz seed must be input length - 1");
      }
    } else if (seed_len != output_len + input_len - 1) {
      throw Error(Errc::kSeedSizeMismatch, "Toeplitz seed must be output + input length - 1");
    }
  }

  /// Number of columns in the Toeplitz block.
  std::size_t toeplitz_cols() const noexcept {
    return family == Family::kModifiedToeplitz ? input_len - output_len : input_len;
  }

  friend bool operator==(const ExtractorParams&, const ExtractorParams&) = default;
};

/// One member of the hash family.
class SeededHash {
 public:
  SeededHash(ExtractorParams params, BitString seed)
      : params_(params), seed_(std::move(seed)) {
    params_.validate();
    if (seed_.size() != params_.seed_len) {
      throw Error(Errc::kLengthMismatch, "seed length " + std::to_string(seed_.size()) +
                                             " does not match " + std::to_string(params_.seed_len));
    }
  }

  const ExtractorParams& params() const noexcept { return params_; }
  const BitString& seed() const noexcept { return seed_; }

  /// Matrix entry at row i, column j.
  bool entry(std::size_t i, std::size_t j) const {
    const std::size_t cols = params_.toeplitz_cols();
    if (j >= cols) return j - cols == i;
    return i >= j ? seed_[i - j] : seed_[params_.output_len - 1 + (j - i)];
  }

  /// Rows of 0/1 characters; debug aid for small matrices.
  std::string matrix_dump() const {
    if (params_.input_len > 64) throw Error(Errc::kGuardExceeded, "matrix dump limited to n <= 64");
    std::string out;
    for (std::size_t i = 0; i < params_.output_len; ++i) {
      for (std::size_t j = 0; j < params_.input_len; ++j) out.push_back(entry(i, j) ? '1' : '0');
      out.push_back('\n');
    }
    return out;
  }

 private:
  ExtractorParams params_;
  BitString seed_;
};

namespace detail {

inline void check_input(const SeededHash& h, const BitString& x) {
  if (x.size() != h.params().input_len) {
    throw Error(Errc::kLengthMismatch, "input length " + std::to_string(x.size()) +
                                           " does not match " +
                                           std::to_string(h.params().input_len));
  }
}

}  // namespace detail

/// Reference path: entry-by-entry matrix-vector product.
inline BitString extract(const SeededHash& h, const BitString& x) {
  detail::check_input(h, x);
  const auto& p = h.params();
  std::vector<std::uint8_t> in(p.input_len);
  for (std::size_t j = 0; j < p.input_len; ++j) in[j] = x[j];
  BitString out(p.output_len);
  for (std::size_t i = 0; i < p.output_len; ++i) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < p.input_len; ++j) acc ^= static_cast<std::uint8_t>(h.entry(i, j) & in[j]);
    out.set(i, acc != 0);
  }
  return out;
}

/// Word-packed path. Row i of the Toeplitz block, read right to left, is a
/// contiguous window of a single diagonal string, so each output bit is the
/// parity of (window AND reversed input prefix), 64 columns per step.
inline BitString extract_fast(const SeededHash& h, const BitString& x) {
  detail::check_input(h, x);
  const auto& p = h.params();
  const std::size_t m = p.output_len;
  const std::size_t cols = p.toeplitz_cols();
  const bool identity_block = p.family == Family::kModifiedToeplitz;
  if (cols == 0) return x.slice(0, m);

  const BitString& s = h.seed();
  // diag[t] = T[i][j] for every (i, j) with i - j = t - (cols - 1).
  BitString diag(m + cols - 1);
  for (std::size_t t = 0; t + 1 < cols; ++t) diag.set(t, s[m + cols - 2 - t]);
  for (std::size_t t = cols - 1; t < diag.size(); ++t) diag.set(t, s[t - (cols - 1)]);
  BitString rev(cols);
  for (std::size_t k = 0; k < cols; ++k) rev.set(k, x[cols - 1 - k]);

  const auto rw = rev.words();
  BitString out(m);
  for (std::size_t i = 0; i < m; ++i) {
    BitString::Word acc = 0;
    for (std::size_t w = 0; w < rw.size(); ++w) acc ^= diag.word_at(i + w * 64) & rw[w];
    bool bit = std::popcount(acc) & 1;
    if (identity_block) bit ^= x[cols + i];
    if (bit) out.set(i, true);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive oracles. Inputs, outputs and seeds are handled as integers whose
// most significant bit is string position 0.

/// Seed enumeration is limited to n <= 20 and d <= 20.
inline constexpr std::size_t kCollisionGuardInputBits = 20;
inline constexpr std::size_t kCollisionGuardSeedBits = 20;
/// Distribution enumeration is limited to n <= 12 and d <= 20.
inline constexpr std::size_t kDistanceGuardInputBits = 12;
inline constexpr std::size_t kDistanceGuardSeedBits = 20;

namespace detail {

/// col[t] is the matrix column for input bit n - 1 - t, packed as an output index.
inline std::vector<std::uint32_t> packed_columns(const SeededHash& h) {
  const auto& p = h.params();
  std::vector<std::uint32_t> col(p.input_len, 0);
  for (std::size_t t = 0; t < p.input_len; ++t) {
    const std::size_t j = p.input_len - 1 - t;
    std::uint32_t z = 0;
    for (std::size_t i = 0; i < p.output_len; ++i) z = (z << 1) | (h.entry(i, j) ? 1u : 0u);
    col[t] = z;
  }
  return col;
}

inline void check_distance_guard(const ExtractorParams& p) {
  p.validate();
  if (p.input_len > kDistanceGuardInputBits || p.seed_len > kDistanceGuardSeedBits) {
    throw Error(Errc::kGuardExceeded, "exhaustive distance needs n <= 12 and d <= 20");
  }
}

inline void check_distribution(std::span<const double> dist, std::size_t bits, const char* what) {
  if (dist.size() != (std::size_t{1} << bits)) {
    throw Error(Errc::kLengthMismatch, std::string(what) + " table must have 2^len entries");
  }
  double total = 0;
  for (double v : dist) {
    if (!(v >= 0)) throw Error(Errc::kInvalidArgument, std::string(what) + " has a negative entry");
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw Error(Errc::kInvalidArgument, std::string(what) + " does not sum to 1");
  }
}

}  // namespace detail

/// out[x] = H_s(x) for every input index x; n <= 20.
inline std::vector<std::uint32_t> output_table(const SeededHash& h) {
  const auto& p = h.params();
  if (p.input_len > kCollisionGuardInputBits || p.output_len > 32) {
    throw Error(Errc::kGuardExceeded, "output table needs n <= 20");
  }
  const auto col = detail::packed_columns(h);
  std::vector<std::uint32_t> out(std::size_t{1} << p.input_len, 0);
  for (std::size_t v = 1; v < out.size(); ++v) {
    out[v] = out[v & (v - 1)] ^ col[static_cast<std::size_t>(std::countr_zero(v))];
  }
  return out;
}

/// Exact fraction of seeds on which x and x2 collide.
inline Fraction collision_probability(const ExtractorParams& p, const BitString& x,
                                      const BitString& x2) {
  p.validate();
  if (p.input_len > kCollisionGuardInputBits || p.seed_len > kCollisionGuardSeedBits) {
    throw Error(Errc::kGuardExceeded, "seed enumeration needs n <= 20 and d <= 20");
  }
  if (x.size() != p.input_len || x2.size() != p.input_len) {
    throw Error(Errc::kLengthMismatch, "inputs must match the extractor input length");
  }
  if (x == x2) throw Error(Errc::kInvalidArgument, "collision probability needs distinct inputs");
  const BitString delta = x ^ x2;
  const std::uint64_t seeds = std::uint64_t{1} << p.seed_len;
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const SeededHash h(p, BitString::from_uint(s, p.seed_len));
    const auto col = detail::packed_columns(h);
    std::uint32_t z = 0;
    for (std::size_t j = 0; j < p.input_len; ++j) {
      if (delta[j]) z ^= col[p.input_len - 1 - j];
    }
    if (z == 0) ++hits;
  }
  return Fraction(hits, seeds);
}

/// Seed-weighted distance of (output, seed) from (uniform, seed) for an
/// explicit input distribution and seed distribution.
inline double exact_extraction_distance(const ExtractorParams& p, std::span<const double> dist,
                                        std::span<const double> seed_dist) {
  detail::check_distance_guard(p);
  detail::check_distribution(dist, p.input_len, "input distribution");
  detail::check_distribution(seed_dist, p.seed_len, "seed distribution");
  const std::size_t outs = std::size_t{1} << p.output_len;
  const double uniform = 1.0 / static_cast<double>(outs);
  std::vector<double> pz(outs);
  double total = 0;
  for (std::uint64_t s = 0; s < seed_dist.size(); ++s) {
    if (seed_dist[s] == 0) continue;
    const auto table = output_table(SeededHash(p, BitString::from_uint(s, p.seed_len)));
    std::fill(pz.begin(), pz.end(), 0.0);
    for (std::size_t x = 0; x < dist.size(); ++x) pz[table[x]] += dist[x];
    double d = 0;
    for (double v : pz) d += std::fabs(v - uniform);
    total += seed_dist[s] * d;
  }
  return 0.5 * total;
}

/// Same distance with a uniform seed.
inline double exact_extraction_distance(const ExtractorParams& p, std::span<const double> dist) {
  detail::check_distance_guard(p);
  const std::vector<double> seeds(std::size_t{1} << p.seed_len,
                                  1.0 / static_cast<double>(std::size_t{1} << p.seed_len));
  return exact_extraction_distance(p, dist, seeds);
}

/// Exact distance for a flat input source (uniform over `support`) and a
/// flat seed (uniform over `seed_support`, or over all seeds when empty).
inline Fraction flat_extraction_distance(const ExtractorParams& p,
                                         std::span<const std::uint32_t> support,
                                         std::span<const std::uint32_t> seed_support = {}) {
  detail::check_distance_guard(p);
  if (support.empty()) throw Error(Errc::kInvalidArgument, "flat source needs a nonempty support");
  std::vector<std::uint32_t> all_seeds;
  if (seed_support.empty()) {
    all_seeds.resize(std::size_t{1} << p.seed_len);
    for (std::size_t s = 0; s < all_seeds.size(); ++s) all_seeds[s] = static_cast<std::uint32_t>(s);
    seed_support = all_seeds;
  }
  const std::uint64_t outs = std::uint64_t{1} << p.output_len;
  const std::uint64_t n_support = support.size();
  std::vector<std::uint64_t> counts(outs);
  // Sum over seeds and outputs of |count * 2^m - N|; the distance is that
  // sum over 2 * |seeds| * N * 2^m.
  std::uint64_t sum = 0;
  for (std::uint32_t s : seed_support) {
    const auto table = output_table(SeededHash(p, BitString::from_uint(s, p.seed_len)));
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint32_t x : support) ++counts[table.at(x)];
    for (std::uint64_t c : counts) {
      const std::uint64_t scaled = c * outs;
      sum += scaled > n_support ? scaled - n_support : n_support - scaled;
    }
  }
  return Fraction(sum, 2 * seed_support.size() * n_support * outs);
}

}  // namespace qlhl
