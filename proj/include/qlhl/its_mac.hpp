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

// One-time Wegman-Carter MAC: tag = hash(msg) XOR pad.
//
// The hash is the modified Toeplitz family applied to msg || 0^t, where t is
// the tag length. Hashing the bare message would let the identity block pass
// the last t message bits straight into the tag, so flipping a message bit
// and the matching tag bit forges with certainty. With the zero extension the
// identity block only sees zeros and the map reduces to a full Toeplitz
// matrix, which is almost XOR universal.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>

#include "qlhl/bits.hpp"
#include "qlhl/error.hpp"
#include "qlhl/extractor.hpp"

namespace qlhl {

struct MacKey {
  BitString hash_seed;
  BitString pad;

  std::size_t tag_len() const noexcept { return pad.size(); }
};

inline std::size_t mac_seed_len(std::size_t msg_len, std::size_t tag_len) {
  return msg_len + tag_len - 1;
}

/// Total key bits consumed by one authentication.
inline std::size_t mac_key_len(std::size_t msg_len, std::size_t tag_len) {
  return mac_seed_len(msg_len, tag_len) + tag_len;
}

/// Splits raw key material as hash seed || pad.
inline MacKey mac_key_from_bits(const BitString& bits, std::size_t msg_len, std::size_t tag_len) {
  if (msg_len < 1 || tag_len < 1) throw Error(Errc::kInvalidArgument, "message and tag must be non-empty");
  if (bits.size() != mac_key_len(msg_len, tag_len)) {
    throw Error(Errc::kLengthMismatch, "MAC key needs " + std::to_string(mac_key_len(msg_len, tag_len)) +
                                           " bits, got " + std::to_string(bits.size()));
  }
  auto [seed, pad] = split(bits, mac_seed_len(msg_len, tag_len));
  return {std::move(seed), std::move(pad)};
}

namespace detail {

inline BitString mac_hash(const MacKey& key, const BitString& msg) {
  if (msg.empty() || key.pad.empty()) throw Error(Errc::kInvalidArgument, "message and tag must be non-empty");
  if (key.hash_seed.size() != mac_seed_len(msg.size(), key.tag_len())) {
    throw Error(Errc::kLengthMismatch, "MAC hash seed has " + std::to_string(key.hash_seed.size()) +
                                           " bits, message needs " +
                                           std::to_string(mac_seed_len(msg.size(), key.tag_len())));
  }
  const auto p = ExtractorParams::modified(msg.size() + key.tag_len(), key.tag_len());
  return extract_fast(SeededHash(p, key.hash_seed), concat(msg, BitString(key.tag_len())));
}

}  // namespace detail

inline BitString its_mac_auth(const MacKey& key, const BitString& msg) {
  return detail::mac_hash(key, msg) ^ key.pad;
}

inline bool its_mac_verify(const MacKey& key, const BitString& msg, const BitString& tag) {
  if (tag.size() != key.tag_len()) return false;
  // Full comparison, no early exit on the first differing word.
  const auto want = its_mac_auth(key, msg);
  BitString::Word diff = 0;
  const auto a = want.words();
  const auto b = tag.words();
  for (std::size_t i = 0; i < a.size(); ++i) diff |= a[i] ^ b[i];
  return diff == 0;
}

// ---------------------------------------------------------------------------
// Keyed polynomial digest over GF(2^64), modulus x^64 + x^4 + x^3 + x + 1.
// Two distinct messages of at most L blocks collide for at most (L + 1) / 2^64
// of the keys. The key length is fixed, which lets a short MAC cover fields
// whose own length depends on the MAC key size.

inline constexpr std::size_t kDigestBits = 64;

inline std::uint64_t gf64_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t acc = 0;
  for (int i = 0; i < 64; ++i) {
    if (b & 1) acc ^= a;
    b >>= 1;
    const bool carry = a >> 63;
    a <<= 1;
    if (carry) a ^= 0x1b;
  }
  return acc;
}

/// Horner evaluation of the 64-bit blocks of msg, followed by a length block.
inline BitString poly_digest(const BitString& key, const BitString& msg) {
  if (key.size() != kDigestBits) throw Error(Errc::kLengthMismatch, "digest key must be 64 bits");
  const std::uint64_t k = key.to_uint();
  std::uint64_t acc = 0;
  for (std::size_t pos = 0; pos < msg.size(); pos += 64) {
    const std::size_t take = std::min<std::size_t>(64, msg.size() - pos);
    const std::uint64_t block = msg.slice(pos, take).to_uint() << (64 - take) % 64;
    acc = gf64_mul(acc ^ block, k);
  }
  acc = gf64_mul(acc ^ static_cast<std::uint64_t>(msg.size()), k);
  return BitString::from_uint(acc, 64);
}

}  // namespace qlhl
