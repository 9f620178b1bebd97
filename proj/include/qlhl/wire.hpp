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

// Handshake record codec.
//
//   record = type (1 byte, 1..8) | payload length (4 bytes BE) | payload
//   field  = bit length (4 bytes BE) | ceil(bits / 8) bytes, low-padded
//
// Decoding is strict: trailing bytes, short reads and nonzero padding bits
// are all format errors.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qlhl/bits.hpp"
#include "qlhl/error.hpp"

namespace qlhl {

struct WireMessage {
  std::uint8_t type = 0;
  std::vector<BitString> fields;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

using WireBytes = std::vector<std::uint8_t>;

namespace detail {

inline void put_u32(WireBytes& out, std::uint64_t v) {
  if (v > 0xffffffffULL) throw Error(Errc::kRange, "wire length exceeds 32 bits");
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  if (at + 4 > in.size()) throw Error(Errc::kFormat, "truncated length prefix");
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = v << 8 | in[at + i];
  return v;
}

}  // namespace detail

inline WireBytes encode_message(const WireMessage& m) {
  if (m.type < 1 || m.type > 8) throw Error(Errc::kInvalidArgument, "message type must be 1..8");
  WireBytes payload;
  for (const auto& f : m.fields) {
    detail::put_u32(payload, f.size());
    const auto bytes = f.to_bytes();
    payload.insert(payload.end(), bytes.begin(), bytes.end());
  }
  WireBytes out{m.type};
  detail::put_u32(out, payload.size());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

inline WireMessage decode_message(std::span<const std::uint8_t> in) {
  if (in.empty()) throw Error(Errc::kFormat, "empty record");
  WireMessage m;
  m.type = in[0];
  if (m.type < 1 || m.type > 8) throw Error(Errc::kFormat, "unknown message type");
  const std::uint32_t len = detail::get_u32(in, 1);
  if (in.size() != 5 + std::size_t{len}) throw Error(Errc::kFormat, "payload length mismatch");
  std::size_t at = 5;
  while (at < in.size()) {
    const std::uint32_t bits = detail::get_u32(in, at);
    at += 4;
    const std::size_t nbytes = (std::size_t{bits} + 7) / 8;
    if (nbytes > in.size() - at) throw Error(Errc::kFormat, "field runs past end of record");
    const auto raw = in.subspan(at, nbytes);
    auto f = BitString::from_bytes(raw, bits);
    const auto back = f.to_bytes();
    if (!std::equal(back.begin(), back.end(), raw.begin())) {
      throw Error(Errc::kFormat, "nonzero padding bits in field");
    }
    m.fields.push_back(std::move(f));
    at += nbytes;
  }
  return m;
}

inline BitString bytes_to_bits(std::span<const std::uint8_t> bytes) {
  return BitString::from_bytes(bytes, bytes.size() * 8);
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

}  // namespace qlhl
