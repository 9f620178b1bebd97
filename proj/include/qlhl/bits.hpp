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

// Exact bit strings over GF(2) and the on-disk .qbits container.
//
// Bit 0 is the leading (most significant) bit. Internally bits are packed
// into 64-bit words with bit i stored at position (i % 64) of word i / 64;
// the unused tail of the last word is always zero. Serialized bytes are
// big-endian within each byte, the final byte zero-padded in its low bits.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlhl/error.hpp"

namespace qlhl {

class BitString {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitString() = default;

  /// All-zero string of `n` bits.
  explicit BitString(std::size_t n) : size_(n), words_(word_count(n), 0) {}

  BitString(const BitString&) = default;
  BitString(BitString&& other) noexcept
      : size_(std::exchange(other.size_, 0)), words_(std::move(other.words_)) {
    other.words_.clear();
  }
  BitString& operator=(const BitString& other) {
    if (this != &other) {
      wipe();
      size_ = other.size_;
      words_ = other.words_;
    }
    return *this;
  }
  BitString& operator=(BitString&& other) noexcept {
    if (this != &other) {
      wipe();
      size_ = std::exchange(other.size_, 0);
      words_ = std::move(other.words_);
      other.words_.clear();
    }
    return *this;
  }
  // Best-effort overwrite of key material on release. Simulation grade: no
  // guarantee against copies made by the allocator or the optimizer.
  ~BitString() { wipe(); }

  static BitString zeros(std::size_t n) { return BitString(n); }

  /// Parses a string of '0'/'1' characters; anything else is a format error.
  static BitString from_string(std::string_view s) {
    BitString out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        out.set(i, true);
      } else if (s[i] != '0') {
        throw Error(Errc::kFormat, "bit string may only contain '0' and '1'");
      }
    }
    return out;
  }

  /// The low `nbits` bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t nbits) {
    if (nbits > 64) throw Error(Errc::kRange, "from_uint supports at most 64 bits");
    BitString out(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
      out.set(i, (value >> (nbits - 1 - i)) & 1u);
    }
    return out;
  }

  /// Reads `nbits` bits from big-endian-within-byte storage.
  static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits) {
    if (bytes.size() != (nbits + 7) / 8) {
      throw Error(Errc::kLengthMismatch, "byte count does not match bit length");
    }
    BitString out(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
      out.set(i, (bytes[i / 8] >> (7 - i % 8)) & 1u);
    }
    return out;
  }

  static BitString from_hex(std::string_view hex, std::size_t nbits) {
    if (hex.size() != 2 * ((nbits + 7) / 8)) {
      throw Error(Errc::kLengthMismatch, "hex digit count does not match bit length");
    }
    std::vector<std::uint8_t> bytes(hex.size() / 2);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      bytes[i] = static_cast<std::uint8_t>(hex_value(hex[2 * i]) << 4 | hex_value(hex[2 * i + 1]));
    }
    BitString out = from_bytes(bytes, nbits);
    if (out.to_bytes() != bytes) {
      throw Error(Errc::kFormat, "nonzero padding bits in hex input");
    }
    return out;
  }

  /// Uniform bits from a 64-bit generator (std::mt19937_64 and friends).
  template <class Urbg>
  static BitString random(std::size_t n, Urbg& gen) {
    static_assert(sizeof(typename Urbg::result_type) >= 8,
                  "random() expects a 64-bit generator");
    BitString out(n);
    for (auto& w : out.words_) w = static_cast<Word>(gen());
    out.clear_tail();
    return out;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  /// Unchecked access.
  bool operator[](std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }

  bool at(std::size_t i) const {
    if (i >= size_) throw Error(Errc::kRange, "bit index out of range");
    return (*this)[i];
  }

  void set(std::size_t i, bool v) {
    if (i >= size_) throw Error(Errc::kRange, "bit index out of range");
    const Word mask = Word{1} << (i % kWordBits);
    if (v) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  void flip(std::size_t i) {
    if (i >= size_) throw Error(Errc::kRange, "bit index out of range");
    words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
  }

  std::span<const Word> words() const noexcept { return words_; }

  /// 64 bits starting at `pos`; bits past the end read as zero.
  Word word_at(std::size_t pos) const noexcept {
    const std::size_t wi = pos / kWordBits;
    const std::size_t sh = pos % kWordBits;
    if (wi >= words_.size()) return 0;
    Word lo = words_[wi] >> sh;
    if (sh != 0 && wi + 1 < words_.size()) lo |= words_[wi + 1] << (kWordBits - sh);
    return lo;
  }

  std::size_t popcount() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }

  /// Big-endian integer value; only for strings of at most 64 bits.
  std::uint64_t to_uint() const {
    if (size_ > 64) throw Error(Errc::kRange, "to_uint supports at most 64 bits");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < size_; ++i) v = (v << 1) | ((*this)[i] ? 1u : 0u);
    return v;
  }

  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
    for (std::size_t i = 0; i < size_; ++i) {
      if ((*this)[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
      if ((*this)[i]) s[i] = '1';
    }
    return s;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    for (std::uint8_t b : to_bytes()) {
      s.push_back(kDigits[b >> 4]);
      s.push_back(kDigits[b & 0xf]);
    }
    return s;
  }

  /// Appends `other` in place; the building block of concat.
  BitString& append(const BitString& other) {
    const std::size_t old = size_;
    size_ += other.size_;
    words_.resize(word_count(size_), 0);
    const std::size_t sh = old % kWordBits;
    std::size_t wi = old / kWordBits;
    for (Word w : other.words_) {
      words_[wi] |= w << sh;
      if (sh != 0 && wi + 1 < words_.size()) words_[wi + 1] |= w >> (kWordBits - sh);
      ++wi;
    }
    clear_tail();
    return *this;
  }

  /// Bits [begin, begin + len).
  BitString slice(std::size_t begin, std::size_t len) const {
    if (begin > size_ || len > size_ - begin) {
      throw Error(Errc::kRange, "slice exceeds bit string");
    }
    BitString out(len);
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
      out.words_[w] = word_at(begin + w * kWordBits);
    }
    out.clear_tail();
    return out;
  }

  BitString& operator^=(const BitString& other) {
    if (size_ != other.size_) {
      throw Error(Errc::kLengthMismatch, "xor of bit strings with different lengths");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
  }

  friend bool operator==(const BitString& a, const BitString& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  friend auto operator<=>(const BitString& a, const BitString& b) noexcept {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    for (std::size_t i = 0; i < a.size_; ++i) {
      if (a[i] != b[i]) return a[i] ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
  }

 private:
  static std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

  static int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(Errc::kFormat, "invalid hex digit");
  }

  void clear_tail() noexcept {
    if (size_ % kWordBits != 0 && !words_.empty()) {
      words_.back() &= (Word{1} << (size_ % kWordBits)) - 1;
    }
  }

  void wipe() noexcept {
    volatile Word* p = words_.data();
    for (std::size_t i = 0; i < words_.size(); ++i) p[i] = 0;
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

inline BitString concat(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

inline BitString concat(std::initializer_list<const BitString*> parts) {
  BitString out;
  for (const BitString* p : parts) out.append(*p);
  return out;
}

inline BitString concat(std::span<const BitString> parts) {
  BitString out;
  for (const BitString& p : parts) out.append(p);
  return out;
}

/// (x[0, at), x[at, |x|)).
inline std::pair<BitString, BitString> split(const BitString& x, std::size_t at) {
  if (at > x.size()) throw Error(Errc::kRange, "split point beyond end of bit string");
  return {x.slice(0, at), x.slice(at, x.size() - at)};
}

inline BitString operator^(const BitString& a, const BitString& b) {
  BitString out = a;
  out ^= b;
  return out;
}

/// Bitwise exclusive-or of equal-length strings.
inline BitString bit_xor(const BitString& a, const BitString& b) { return a ^ b; }

/// Drops the trailing `q` bits, keeping the prefix.
inline BitString truncate(const BitString& x, std::size_t q) {
  if (q > x.size()) throw Error(Errc::kRange, "cannot truncate more bits than present");
  return x.slice(0, x.size() - q);
}

// ---------------------------------------------------------------------------
// .qbits container: "QLHLBITS" | version 0x01 | u64 LE bit length | payload

inline constexpr std::array<char, 8> kQbitsMagic = {'Q', 'L', 'H', 'L', 'B', 'I', 'T', 'S'};
inline constexpr std::uint8_t kQbitsVersion = 0x01;
inline constexpr std::size_t kQbitsHeaderSize = 8 + 1 + 8;

inline std::vector<std::uint8_t> encode_qbits(const BitString& bits) {
  const auto payload = bits.to_bytes();
  std::vector<std::uint8_t> out(kQbitsHeaderSize + payload.size());
  std::copy(kQbitsMagic.begin(), kQbitsMagic.end(), out.begin());
  out[8] = kQbitsVersion;
  const std::uint64_t n = bits.size();
  for (std::size_t i = 0; i < 8; ++i) out[9 + i] = static_cast<std::uint8_t>(n >> (8 * i));
  std::copy(payload.begin(), payload.end(), out.begin() + kQbitsHeaderSize);
  return out;
}

inline BitString decode_qbits(std::span<const std::uint8_t> data) {
  if (data.size() < kQbitsHeaderSize ||
      !std::equal(kQbitsMagic.begin(), kQbitsMagic.end(), data.begin())) {
    throw Error(Errc::kFormat, "missing QLHLBITS magic");
  }
  if (data[8] != kQbitsVersion) throw Error(Errc::kFormat, "unsupported qbits version");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= std::uint64_t{data[9 + i]} << (8 * i);
  const auto payload = data.subspan(kQbitsHeaderSize);
  if (n > payload.size() * 8 || payload.size() != (n + 7) / 8) {
    throw Error(Errc::kFormat, "qbits payload size does not match declared bit length");
  }
  BitString out = BitString::from_bytes(payload, static_cast<std::size_t>(n));
  if (!std::equal(payload.begin(), payload.end(), out.to_bytes().begin())) {
    throw Error(Errc::kFormat, "nonzero padding bits in qbits payload");
  }
  return out;
}

inline void write_qbits(const std::string& path, const BitString& bits) {
  const auto data = encode_qbits(bits);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::kInvalidArgument, "cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!f) throw Error(Errc::kInvalidArgument, "write failed: " + path);
}

inline BitString read_qbits(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::kInvalidArgument, "cannot open for reading: " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(f)),
                                 std::istreambuf_iterator<char>());
  return decode_qbits(data);
}

}  // namespace qlhl
