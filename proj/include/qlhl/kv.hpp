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

// Flat key-value documents: one `key = value` per line, `#` starts a comment.
// Keys are unique and keep insertion order so reports are reproducible.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "qlhl/error.hpp"

namespace qlhl {

/// Shortest round-trip decimal form; infinities print as "inf".
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(Errc::kFormat, "cannot format number");
  return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw Error(Errc::kFormat, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw Error(Errc::kFormat, "not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

class KvDoc {
 public:
  using Entry = std::pair<std::string, std::string>;

  static KvDoc parse(std::string_view text) {
    KvDoc doc;
    std::size_t line_no = 0;
    while (!text.empty()) {
      ++line_no;
      const auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw Error(Errc::kFormat, "line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      const auto key = trim(line.substr(0, eq));
      if (key.empty()) {
        throw Error(Errc::kFormat, "line " + std::to_string(line_no) + ": empty key");
      }
      doc.set(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return doc;
  }

  static KvDoc load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::kInvalidArgument, "cannot open for reading: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error(Errc::kInvalidArgument, "cannot open for writing: " + path);
    f << to_string();
  }

  /// Adds a new key; repeating a key is a format error.
  KvDoc& set(std::string key, std::string value) {
    if (find(key)) throw Error(Errc::kFormat, "duplicate key '" + key + "'");
    entries_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  KvDoc& set(std::string key, const char* value) { return set(std::move(key), std::string(value)); }
  KvDoc& set(std::string key, double value) { return set(std::move(key), format_double(value)); }
  KvDoc& set(std::string key, bool value) {
    return set(std::move(key), std::string(value ? "true" : "false"));
  }
  template <class Int>
    requires std::is_integral_v<Int> && (!std::is_same_v<Int, bool>)
  KvDoc& set(std::string key, Int value) {
    return set(std::move(key), std::to_string(value));
  }

  /// Appends every entry of `other` with `prefix` prepended to its key.
  KvDoc& merge(const KvDoc& other, const std::string& prefix = "") {
    for (const auto& [k, v] : other.entries_) set(prefix + k, v);
    return *this;
  }

  std::optional<std::string> find(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  bool contains(std::string_view key) const { return find(key).has_value(); }

  const std::string& get(std::string_view key) const {
    for (const auto& e : entries_) {
      if (e.first == key) return e.second;
    }
    throw Error(Errc::kFormat, "missing key '" + std::string(key) + "'");
  }

  double get_double(std::string_view key) const { return parse_double(get(key)); }
  std::uint64_t get_uint(std::string_view key) const { return parse_uint(get(key)); }
  bool get_bool(std::string_view key) const {
    const auto& v = get(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(Errc::kFormat, "not a boolean: '" + v + "'");
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
      out += k;
      out += " = ";
      out += v;
      out += '\n';
    }
    return out;
  }

 private:
  static std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::vector<Entry> entries_;
};

}  // namespace qlhl
