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

// Simulation-grade stand-ins for the computational parts of the handshake:
// a keyed mixing function, a KEM and a QKD key store. None of these offer any
// real security; they exist so the key schedule has something to consume.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <utility>

#include "qlhl/bits.hpp"
#include "qlhl/entropy.hpp"
#include "qlhl/error.hpp"

namespace qlhl {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline void absorb(std::uint64_t& state, std::uint64_t word) {
  state ^= word;
  state = splitmix64(state);
}

inline void absorb(std::uint64_t& state, const BitString& bits) {
  absorb(state, static_cast<std::uint64_t>(bits.size()));
  for (auto w : bits.words()) absorb(state, w);
}

}  // namespace detail

/// Deterministic keyed expansion to `out_len` bits. Not a PRF in any proven
/// sense; stands in for one.
inline BitString mix(const BitString& key, const BitString& context, std::size_t out_len) {
  std::uint64_t state = 0x243f6a8885a308d3ULL;
  detail::absorb(state, key);
  detail::absorb(state, context);
  detail::absorb(state, static_cast<std::uint64_t>(out_len));
  BitString out(out_len);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < out_len; ++i) {
    if (i % 64 == 0) word = detail::splitmix64(state);
    if ((word >> (i % 64)) & 1) out.set(i, true);
  }
  return out;
}

/// Expands a computational secret. The output inherits the secret's entropy
/// as HILL entropy, capped at the output length.
inline std::pair<BitString, SourceSpec> expand_secret(const BitString& secret, const SourceSpec& spec,
                                                      const BitString& context, std::size_t out_len,
                                                      std::string label) {
  const double h = std::min(spec.hmin(), static_cast<double>(out_len));
  return {mix(secret, context, out_len),
          SourceSpec(std::move(label), out_len, h, spec.eps(), EntropyKind::kHill)};
}

struct KemKeyPair {
  BitString pk;
  BitString sk;
};

struct Encapsulation {
  BitString ciphertext;
  BitString shared_secret;
};

/// pk = mix(sk), ct = r, ss = mix(pk || r). Anyone holding pk and ct can
/// recompute ss, which is fine for exercising the key schedule and nothing else.
class MockKem {
 public:
  explicit MockKem(std::size_t bits) : bits_(bits) {
    if (bits_ < 1) throw Error(Errc::kInvalidArgument, "KEM size must be at least 1 bit");
  }

  std::size_t bits() const noexcept { return bits_; }

  template <class Urbg>
  KemKeyPair keygen(Urbg& rng) const {
    auto sk = BitString::random(bits_, rng);
    return {public_of(sk), std::move(sk)};
  }

  template <class Urbg>
  Encapsulation encaps(const BitString& pk, Urbg& rng) const {
    check(pk, "public key");
    auto r = BitString::random(bits_, rng);
    auto ss = secret_of(pk, r);
    return {std::move(r), std::move(ss)};
  }

  BitString decaps(const BitString& sk, const BitString& ct) const {
    check(sk, "secret key");
    check(ct, "ciphertext");
    return secret_of(public_of(sk), ct);
  }

  /// Declared strength of a shared secret.
  SourceSpec secret_spec(std::string label) const {
    return SourceSpec(std::move(label), bits_, static_cast<double>(bits_), SecurityLevel::perfect(),
                      EntropyKind::kHill);
  }

 private:
  BitString public_of(const BitString& sk) const {
    return mix(sk, BitString::from_uint(0x706b, 16), bits_);
  }
  BitString secret_of(const BitString& pk, const BitString& ct) const {
    return mix(concat(pk, ct), BitString::from_uint(0x7373, 16), bits_);
  }
  void check(const BitString& x, const char* what) const {
    if (x.size() != bits_) {
      throw Error(Errc::kLengthMismatch, std::string("KEM ") + what + " has the wrong length");
    }
  }

  std::size_t bits_;
};

struct QkdKey {
  BitString key;
  BitString id;
};

/// Shared key store standing in for a QKD link. Both endpoints hold a
/// reference; GetKey hands out fresh material and GetKeyWithID retrieves it.
class MockQkdStore {
 public:
  MockQkdStore(std::uint64_t rng_seed, std::size_t id_bits = 32,
               SecurityLevel eps = SecurityLevel::perfect())
      : rng_(rng_seed), id_bits_(id_bits), eps_(eps) {
    if (id_bits_ < 8 || id_bits_ > 64) throw Error(Errc::kInvalidArgument, "QKD id must be 8..64 bits");
  }

  std::size_t id_bits() const noexcept { return id_bits_; }
  SecurityLevel eps() const noexcept { return eps_; }

  QkdKey get_key(std::size_t len) {
    std::lock_guard lock(mu_);
    std::uint64_t id = 0;
    do {
      id = rng_() >> (64 - id_bits_);
    } while (keys_.contains(id));
    auto key = BitString::random(len, rng_);
    keys_.emplace(id, key);
    return {std::move(key), BitString::from_uint(id, id_bits_)};
  }

  BitString get_key_with_id(const BitString& id) const {
    if (id.size() != id_bits_) throw Error(Errc::kUnknownQkdId, "QKD id has the wrong length");
    std::lock_guard lock(mu_);
    const auto it = keys_.find(id.to_uint());
    if (it == keys_.end()) throw Error(Errc::kUnknownQkdId, "no QKD key with id " + id.to_hex());
    return it->second;
  }

  SourceSpec key_spec(std::size_t len) const {
    return SourceSpec::secure("k_qkd", len, eps_);
  }

 private:
  mutable std::mutex mu_;
  std::mt19937_64 rng_;
  std::size_t id_bits_;
  SecurityLevel eps_;
  std::map<std::uint64_t, BitString> keys_;
};

}  // namespace qlhl
