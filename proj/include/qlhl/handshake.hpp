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

// Two-party hybrid QKD/PQC handshake over an in-memory channel.
//
//   m1  I -> R  pk_pq, n_I
//   m2  R -> I  c_pq, ID_qkd, n_R, s1
//   m3  R -> I  {cert_R}_RHTS
//   m4  I -> R  {c_I}_IHTS, s2
//   m5  I -> R  {cert_I}_IAHTS
//   m6  R -> I  {c_R}_RAHTS, s3
//   m7  I -> R  {IF}_IAHTS, s4
//   m8  R -> I  {RF}_RAHTS
//
// {x}_K is a one-time pad carved from K; each secret is consumed front to back
// and never reused. Seeds travel in clear.
//
// A seed is as long as the stage input it hashes, so no traffic view fed to
// an extraction or a Toeplitz MAC can contain a seed without making its own
// length depend on itself. Traffic views therefore leave the seed fields out.
// The finish MACs bind the seeds through a 64-bit keyed polynomial digest
// whose key is carried at the end of fk_I / fk_R:
//
//   fk   = toeplitz seed || pad || digest key
//   IF   = MAC(fk_I, traffic_3 || digest(s1, s2, s3))
//   RF   = MAC(fk_R, traffic_4 || digest(s1, s2, s3, s4))

#pragma once

#include <array>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qlhl/bits.hpp"
#include "qlhl/entropy.hpp"
#include "qlhl/error.hpp"
#include "qlhl/its_mac.hpp"
#include "qlhl/providers.hpp"
#include "qlhl/schedule.hpp"
#include "qlhl/wire.hpp"

namespace qlhl {

enum class Role { kInitiator, kResponder };

inline const char* role_name(Role r) { return r == Role::kInitiator ? "initiator" : "responder"; }

enum class AbortReason {
  kNone,
  kChannelLoss,
  kMalformed,
  kUnexpectedMessage,
  kCertificate,
  kMac,
  kUnknownQkdId,
  kInternal,
};

inline const char* abort_reason_name(AbortReason r) {
  switch (r) {
    case AbortReason::kNone: return "none";
    case AbortReason::kChannelLoss: return "channel-loss";
    case AbortReason::kMalformed: return "malformed";
    case AbortReason::kUnexpectedMessage: return "unexpected-message";
    case AbortReason::kCertificate: return "certificate";
    case AbortReason::kMac: return "mac";
    case AbortReason::kUnknownQkdId: return "unknown-qkd-id";
    case AbortReason::kInternal: return "internal";
  }
  return "?";
}

struct Outcome {
  bool success = false;
  AbortReason reason = AbortReason::kNone;
  Role party = Role::kInitiator;
  /// Last message the aborting party saw (0 before any).
  int at_message = 0;
  std::string detail;

  std::string to_string() const {
    if (success) return "success";
    return std::string("abort(") + abort_reason_name(reason) + ") by " + role_name(party) +
           " after m" + std::to_string(at_message) + (detail.empty() ? "" : ": " + detail);
  }
};

/// Toy primitive sizes in bits.
struct HandshakeSizes {
  std::size_t cert = 16;
  std::size_t tag = 32;
  std::size_t kem = 32;
  std::size_t nonce = 32;
  std::size_t id = 32;
};

struct HandshakeConfig {
  /// Length of every derived key other than fk_I, fk_R, and of each
  /// expanded computational secret.
  std::size_t n = 64;
  SecurityLevel eps_prime = SecurityLevel::pow2(16);
  SecurityLevel eps_seed = SecurityLevel::perfect();
  HandshakeSizes sizes;
};

/// Long-term material and trust anchors of one party.
struct PartyConfig {
  std::uint64_t rng_seed = 0;
  BitString sec_state;
  KemKeyPair long_term;
  BitString cert;
  BitString peer_cert;
  BitString peer_pk;
};

struct PartyFixture {
  PartyConfig initiator;
  PartyConfig responder;
};

/// Matching long-term keys, certificates and shared SecState.
inline PartyFixture make_fixture(const HandshakeConfig& cfg, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  const MockKem kem(cfg.sizes.kem);
  PartyFixture f;
  const auto sec_state = BitString::random(cfg.n, rng);
  for (auto* p : {&f.initiator, &f.responder}) {
    p->rng_seed = rng();
    p->sec_state = sec_state;
    p->long_term = kem.keygen(rng);
    do {
      p->cert = BitString::random(cfg.sizes.cert, rng);
    } while (p == &f.responder && p->cert == f.initiator.cert);
  }
  f.initiator.peer_cert = f.responder.cert;
  f.initiator.peer_pk = f.responder.long_term.pk;
  f.responder.peer_cert = f.initiator.cert;
  f.responder.peer_pk = f.initiator.long_term.pk;
  return f;
}

// ---------------------------------------------------------------------------
// Message layout

namespace detail {

/// Index of the seed field in each message, or -1.
inline int seed_field(int type) {
  switch (type) {
    case 2: return 3;
    case 4: case 6: case 7: return 1;
    default: return -1;
  }
}

/// Field sizes in order; seed fields use the given lengths.
inline std::vector<std::size_t> field_sizes(int type, const HandshakeSizes& z,
                                            const std::array<std::size_t, 4>& seeds) {
  switch (type) {
    case 1: return {z.kem, z.nonce};
    case 2: return {z.kem, z.id, z.nonce, seeds[0]};
    case 3: return {z.cert};
    case 4: return {z.kem, seeds[1]};
    case 5: return {z.cert};
    case 6: return {z.kem, seeds[2]};
    case 7: return {z.tag, seeds[3]};
    case 8: return {z.tag};
  }
  throw Error(Errc::kRange, "message types are 1..8");
}

/// Encoded message with its seed field dropped, as bits.
inline BitString traffic_view(const WireMessage& m) {
  WireMessage v{m.type, {}};
  const int sf = seed_field(m.type);
  for (std::size_t i = 0; i < m.fields.size(); ++i) {
    if (static_cast<int>(i) != sf) v.fields.push_back(m.fields[i]);
  }
  return bytes_to_bits(encode_message(v));
}

inline BitString seed_block(std::initializer_list<const BitString*> seeds) {
  BitString out;
  for (const auto* s : seeds) {
    out.append(BitString::from_uint(s->size(), 32));
    out.append(*s);
  }
  return out;
}

}  // namespace detail

/// Sizes agreed before a run.
struct HandshakeLayout {
  HandshakeConfig config;
  ScheduleParams schedule;
  /// traffic_1 .. traffic_5 lengths: m1..m2, m1..m4, m1..m6, m1..m7, m1..m8.
  std::array<std::size_t, 5> traffic_bits{};

  std::size_t fk_len(std::size_t view_bits) const {
    return mac_key_len(view_bits + kDigestBits, config.sizes.tag) + kDigestBits;
  }

  KvDoc to_kv() const {
    KvDoc kv = schedule.to_kv();
    kv.set("n", config.n);
    kv.set("eps_seed", config.eps_seed.to_string());
    for (std::size_t i = 0; i < 5; ++i) kv.set("traffic_bits." + std::to_string(i + 1), traffic_bits[i]);
    return kv;
  }
};

/// Sizes every key, seed and traffic view from zero-filled messages, so that
/// both parties agree on the QKD request and seed lengths before the run.
inline HandshakeLayout plan_handshake(const HandshakeConfig& cfg) {
  const auto& z = cfg.sizes;
  if (cfg.n < 1 || z.cert < 1 || z.tag < 1 || z.kem < 1 || z.nonce < 1) {
    throw Error(Errc::kInvalidArgument, "handshake sizes must be at least 1 bit");
  }
  if (z.id < 8 || z.id > 64) throw Error(Errc::kInvalidArgument, "QKD id must be 8..64 bits");
  if (cfg.eps_prime.is_perfect() || cfg.eps_prime.neg_log2() != cfg.eps_prime.floor_bits()) {
    throw Error(Errc::kInvalidArgument, "handshake needs eps' = 2^-N for an integer N");
  }
  if (cfg.n < z.cert + z.tag || cfg.n < z.kem + z.tag) {
    throw Error(Errc::kPadExhausted, "traffic secrets of " + std::to_string(cfg.n) +
                                         " bits cannot pad the messages they protect");
  }
  HandshakeLayout out;
  out.config = cfg;
  std::size_t running = 0;
  std::array<std::size_t, 9> cumulative{};
  for (int t = 1; t <= 8; ++t) {
    WireMessage m{static_cast<std::uint8_t>(t), {}};
    for (auto s : detail::field_sizes(t, z, {0, 0, 0, 0})) m.fields.emplace_back(s);
    running += detail::traffic_view(m).size();
    cumulative[t] = running;
  }
  out.traffic_bits = {cumulative[2], cumulative[4], cumulative[6], cumulative[7], cumulative[8]};
  KeyLengths lens = KeyLengths::uniform(cfg.n);
  lens.fk_i = out.fk_len(out.traffic_bits[2]);
  lens.fk_r = out.fk_len(out.traffic_bits[3]);
  auto& s = out.schedule = budget(lens, cfg.eps_prime);
  const std::size_t n = cfg.n;
  s.seed_lens[0] = n + s.qkd_budget + n + kLabelBits + out.traffic_bits[0] - 1;
  s.seed_lens[1] = s.k1 + n + kLabelBits + out.traffic_bits[1] - 1;
  s.seed_lens[2] = s.k2 + n + kLabelBits + out.traffic_bits[2] - 1;
  s.seed_lens[3] = s.k3 + kLabelBits + out.traffic_bits[4] - 1;
  return out;
}

// ---------------------------------------------------------------------------
// Channel

/// Adversarial edits applied in the channel, keyed by message type.
struct Tamper {
  enum class Kind { kNone, kFlipBit, kCloseAfter, kReplaceField };
  Kind kind = Kind::kNone;
  int message = 0;
  std::size_t bit = 0;
  std::size_t field = 0;
  BitString value;

  static Tamper flip(int message, std::size_t bit) { return {Kind::kFlipBit, message, bit, 0, {}}; }
  static Tamper close_after(int message) { return {Kind::kCloseAfter, message, 0, 0, {}}; }
  static Tamper replace(int message, std::size_t field, BitString value) {
    return {Kind::kReplaceField, message, 0, field, std::move(value)};
  }

  /// "m7:bit3" or "close:4".
  static Tamper parse(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) throw Error(Errc::kFormat, "tamper spec needs ':'");
    const auto head = s.substr(0, colon), tail = s.substr(colon + 1);
    if (head == "close") return close_after(static_cast<int>(parse_uint(tail)));
    if (head.size() != 2 || head[0] != 'm' || !tail.starts_with("bit")) {
      throw Error(Errc::kFormat, "tamper spec must look like m<k>:bit<i> or close:<k>");
    }
    return flip(head[1] - '0', static_cast<std::size_t>(parse_uint(tail.substr(3))));
  }
};

/// In-order, exactly-once duplex queue. Safe to share between two threads.
class Channel {
 public:
  explicit Channel(Tamper tamper = {}) : tamper_(std::move(tamper)) {}

  void send(Role from, WireBytes bytes) {
    std::lock_guard lock(mu_);
    if (closed_) return;
    const int type = bytes.empty() ? 0 : bytes[0];
    bool close_now = false;
    if (type == tamper_.message) {
      switch (tamper_.kind) {
        case Tamper::Kind::kFlipBit:
          if (tamper_.bit < bytes.size() * 8) {
            bytes[tamper_.bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (tamper_.bit % 8));
            applied_ = true;
          }
          break;
        case Tamper::Kind::kReplaceField: {
          auto m = decode_message(bytes);
          if (tamper_.field < m.fields.size()) {
            m.fields[tamper_.field] = tamper_.value;
            bytes = encode_message(m);
            applied_ = true;
          }
          break;
        }
        case Tamper::Kind::kCloseAfter:
          close_now = applied_ = true;
          break;
        case Tamper::Kind::kNone:
          break;
      }
    }
    inbox_[from == Role::kInitiator ? 1 : 0].push_back(std::move(bytes));
    if (close_now) closed_ = true;
    cv_.notify_all();
  }

  /// Next message for `to`; nullopt once the channel is closed and drained.
  std::optional<WireBytes> recv(Role to) {
    std::unique_lock lock(mu_);
    auto& q = inbox_[to == Role::kInitiator ? 0 : 1];
    cv_.wait(lock, [&] { return !q.empty() || closed_; });
    if (q.empty()) return std::nullopt;
    auto out = std::move(q.front());
    q.pop_front();
    return out;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

  bool tamper_applied() const {
    std::lock_guard lock(mu_);
    return applied_;
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::array<std::deque<WireBytes>, 2> inbox_;
  bool closed_ = false;
  Tamper tamper_;
  bool applied_ = false;
};

// ---------------------------------------------------------------------------
// Parties

struct Finals {
  BitString iats;
  BitString rats;
  BitString sec_state;
  SourceSpec spec;
};

/// Keys derived along the way, kept for inspection.
struct Intermediates {
  BitString k_sec_state, k_pq, k1, ihts, rhts, k_pq_i, k2, iahts, rahts, k_pq_r, k3, fk_i, fk_r;
};

struct HandshakeState {
  Role role = Role::kInitiator;
  BitString sec_state;
  KemKeyPair long_term;
  BitString cert;
  /// m1 .. m8 as sent or received, indexed by type - 1.
  std::array<std::optional<WireMessage>, 8> transcript;
  std::vector<WireBytes> wire_log;
  Intermediates keys;
  std::optional<Finals> finals;
  std::size_t consumed_qkd = 0;
  Outcome outcome;
};

namespace detail {

struct AbortSignal {
  AbortReason reason;
  std::string detail;
};

/// One-time pad segments carved front to back from a secret.
class PadCursor {
 public:
  PadCursor() = default;
  explicit PadCursor(BitString secret) : secret_(std::move(secret)) {}

  BitString take(std::size_t len) {
    if (used_ + len > secret_.size()) throw Error(Errc::kPadExhausted, "traffic secret exhausted");
    auto out = secret_.slice(used_, len);
    used_ += len;
    return out;
  }

 private:
  BitString secret_;
  std::size_t used_ = 0;
};

struct FinishKey {
  MacKey mac;
  BitString digest_key;
};

/// Splits fk as toeplitz seed || pad || digest key for a view of `view_bits`.
inline FinishKey finish_key(const HandshakeLayout& lay, const BitString& fk, std::size_t view_bits) {
  const std::size_t msg_bits = view_bits + kDigestBits;
  const std::size_t mac_bits = mac_key_len(msg_bits, lay.config.sizes.tag);
  if (fk.size() != mac_bits + kDigestBits) throw Error(Errc::kLengthMismatch, "finish key size");
  return {mac_key_from_bits(fk.slice(0, mac_bits), msg_bits, lay.config.sizes.tag),
          fk.slice(mac_bits, kDigestBits)};
}

inline BitString finish_message(const FinishKey& k, const BitString& view, const BitString& seeds) {
  return concat(view, poly_digest(k.digest_key, seeds));
}

class Party {
 public:
  Party(Role role, const HandshakeLayout& lay, const PartyConfig& pc, MockQkdStore& store,
        Channel& ch)
      : lay_(lay), pc_(pc), store_(store), ch_(ch), rng_(pc.rng_seed), kem_(lay.config.sizes.kem) {
    st_.role = role;
    st_.sec_state = pc.sec_state;
    st_.long_term = pc.long_term;
    st_.cert = pc.cert;
  }

  HandshakeState run() {
    try {
      if (pc_.sec_state.size() != lay_.config.n) {
        throw Error(Errc::kLengthMismatch, "SecState must be n bits");
      }
      st_.role == Role::kInitiator ? run_initiator() : run_responder();
      st_.outcome.success = true;
    } catch (const AbortSignal& a) {
      fail(a.reason, a.detail);
    } catch (const Error& e) {
      fail(e.code() == Errc::kUnknownQkdId ? AbortReason::kUnknownQkdId : AbortReason::kInternal,
           e.what());
    } catch (const std::exception& e) {
      fail(AbortReason::kInternal, e.what());
    }
    return std::move(st_);
  }

 private:
  const HandshakeConfig& cfg() const { return lay_.config; }
  const HandshakeSizes& sz() const { return lay_.config.sizes; }
  std::size_t seed_len(int i) const { return lay_.schedule.seed_lens[i - 1]; }

  void fail(AbortReason r, std::string what) {
    st_.outcome.success = false;
    st_.outcome.reason = r;
    st_.outcome.party = st_.role;
    st_.outcome.detail = std::move(what);
    st_.finals.reset();
    ch_.close();
  }

  void send(WireMessage m) {
    auto bytes = encode_message(m);
    st_.wire_log.push_back(bytes);
    st_.transcript[m.type - 1] = std::move(m);
    ch_.send(st_.role, std::move(bytes));
  }

  /// Receives message `type` and checks every field size.
  const WireMessage& recv(int type) {
    auto bytes = ch_.recv(st_.role);
    if (!bytes) throw AbortSignal{AbortReason::kChannelLoss, "channel closed"};
    st_.wire_log.push_back(*bytes);
    WireMessage m;
    try {
      m = decode_message(*bytes);
    } catch (const Error& e) {
      throw AbortSignal{AbortReason::kMalformed, e.what()};
    }
    if (m.type != type) {
      throw AbortSignal{AbortReason::kUnexpectedMessage,
                        "expected m" + std::to_string(type) + ", got m" + std::to_string(m.type)};
    }
    const auto want = field_sizes(type, sz(), lay_.schedule.seed_lens);
    bool ok = m.fields.size() == want.size();
    for (std::size_t i = 0; ok && i < want.size(); ++i) ok = m.fields[i].size() == want[i];
    if (!ok) throw AbortSignal{AbortReason::kMalformed, "m" + std::to_string(type) + " field sizes"};
    st_.outcome.at_message = type;
    st_.transcript[type - 1] = std::move(m);
    return *st_.transcript[type - 1];
  }

  const BitString& field(int type, std::size_t i) const { return st_.transcript[type - 1]->fields[i]; }

  BitString traffic(int upto) const {
    BitString out;
    for (int t = 1; t <= upto; ++t) out.append(traffic_view(*st_.transcript[t - 1]));
    return out;
  }

  void verify_cert(const BitString& got) {
    if (got != pc_.peer_cert) throw AbortSignal{AbortReason::kCertificate, "peer certificate rejected"};
  }

  // Key schedule --------------------------------------------------------------

  void stage1(const BitString& ss_pq, const BitString& k_qkd) {
    const auto tr1 = traffic(2);
    const std::size_t n = cfg().n;
    auto [k_ss, ss_spec] = expand_secret(st_.sec_state, SourceSpec("SecState", n, static_cast<double>(n), SecurityLevel::perfect(), EntropyKind::kHill),
                                         concat(schedule_label(1), tr1), n, "k_SecState");
    auto [k_pq, pq_spec] = expand_secret(ss_pq, kem_.secret_spec("ss_pq"), concat(schedule_label(2), tr1), n, "k_pq");
    const std::vector<KeyMaterial> in = {{k_pq, pq_spec},
                                         {k_qkd, store_.key_spec(k_qkd.size())},
                                         {k_ss, ss_spec}};
    const auto& L = lay_.schedule.lengths;
    const std::array<std::size_t, 3> outs = {lay_.schedule.k1, L.ihts, L.rhts};
    auto r = schedule_stage(1, in, schedule_label(3), tr1, field(2, 3), cfg().eps_seed,
                            cfg().eps_prime, outs);
    st_.keys.k_sec_state = std::move(k_ss);
    st_.keys.k_pq = std::move(k_pq);
    st_.keys.k1 = r.keys[0];
    st_.keys.ihts = r.keys[1];
    st_.keys.rhts = r.keys[2];
    k1_spec_ = SourceSpec::secure("k1", r.keys[0].size(), r.spec.eps());
    ihts_ = PadCursor(st_.keys.ihts);
    rhts_ = PadCursor(st_.keys.rhts);
  }

  void stage2(const BitString& ss_i) {
    const auto tr2 = traffic(4);
    auto [k_pq_i, spec] = expand_secret(ss_i, kem_.secret_spec("ss_I"), concat(schedule_label(4), tr2), cfg().n, "k_pqI");
    const std::vector<KeyMaterial> in = {{st_.keys.k1, k1_spec_}, {k_pq_i, spec}};
    const auto& L = lay_.schedule.lengths;
    const std::array<std::size_t, 3> outs = {lay_.schedule.k2, L.iahts, L.rahts};
    auto r = schedule_stage(2, in, schedule_label(5), tr2, field(4, 1), cfg().eps_seed,
                            cfg().eps_prime, outs);
    st_.keys.k_pq_i = std::move(k_pq_i);
    st_.keys.k2 = r.keys[0];
    st_.keys.iahts = r.keys[1];
    st_.keys.rahts = r.keys[2];
    k2_spec_ = SourceSpec::secure("k2", r.keys[0].size(), r.spec.eps());
    iahts_ = PadCursor(st_.keys.iahts);
    rahts_ = PadCursor(st_.keys.rahts);
  }

  void stage3(const BitString& ss_r) {
    const auto tr3 = traffic(6);
    auto [k_pq_r, spec] = expand_secret(ss_r, kem_.secret_spec("ss_R"), concat(schedule_label(6), tr3), cfg().n, "k_pqR");
    const std::vector<KeyMaterial> in = {{st_.keys.k2, k2_spec_}, {k_pq_r, spec}};
    const auto& L = lay_.schedule.lengths;
    const std::array<std::size_t, 3> outs = {lay_.schedule.k3, L.fk_i, L.fk_r};
    auto r = schedule_stage(3, in, schedule_label(7), tr3, field(6, 1), cfg().eps_seed,
                            cfg().eps_prime, outs);
    st_.keys.k_pq_r = std::move(k_pq_r);
    st_.keys.k3 = r.keys[0];
    st_.keys.fk_i = r.keys[1];
    st_.keys.fk_r = r.keys[2];
    k3_spec_ = SourceSpec::secure("k3", r.keys[0].size(), r.spec.eps());
  }

  void stage4() {
    const std::vector<KeyMaterial> in = {{st_.keys.k3, k3_spec_}};
    const auto& L = lay_.schedule.lengths;
    const std::array<std::size_t, 3> outs = {L.iats, L.rats, L.sec_state};
    auto r = schedule_stage(4, in, schedule_label(8), traffic(8), field(7, 1), cfg().eps_seed,
                            cfg().eps_prime, outs);
    st_.finals = Finals{r.keys[0], r.keys[1], r.keys[2], r.spec};
  }

  /// IF covers traffic_3 and s1..s3; RF covers traffic_4 and s1..s4.
  BitString finish_input(bool responder_tag, FinishKey& key) const {
    const auto view = traffic(responder_tag ? 7 : 6);
    key = finish_key(lay_, responder_tag ? st_.keys.fk_r : st_.keys.fk_i, view.size());
    const auto seeds = responder_tag
                           ? seed_block({&field(2, 3), &field(4, 1), &field(6, 1), &field(7, 1)})
                           : seed_block({&field(2, 3), &field(4, 1), &field(6, 1)});
    return finish_message(key, view, seeds);
  }

  BitString finish_tag(bool responder_tag) const {
    FinishKey key;
    const auto msg = finish_input(responder_tag, key);
    return its_mac_auth(key.mac, msg);
  }

  bool finish_verify(bool responder_tag, const BitString& tag) const {
    FinishKey key;
    const auto msg = finish_input(responder_tag, key);
    return its_mac_verify(key.mac, msg, tag);
  }

  // Message flow --------------------------------------------------------------

  void run_initiator() {
    const auto n_i = BitString::random(sz().nonce, rng_);
    const auto eph = kem_.keygen(rng_);
    send({1, {eph.pk, n_i}});

    recv(2);
    const auto ss_pq = kem_.decaps(eph.sk, field(2, 0));
    const auto k_qkd = store_.get_key_with_id(field(2, 1));
    if (k_qkd.size() != lay_.schedule.qkd_budget) {
      throw AbortSignal{AbortReason::kUnknownQkdId, "QKD key has the wrong length"};
    }
    st_.consumed_qkd = k_qkd.size();
    stage1(ss_pq, k_qkd);

    recv(3);
    verify_cert(field(3, 0) ^ rhts_.take(sz().cert));

    const auto enc_i = kem_.encaps(pc_.peer_pk, rng_);
    const auto s2 = BitString::random(seed_len(2), rng_);
    send({4, {enc_i.ciphertext ^ ihts_.take(sz().kem), s2}});
    stage2(enc_i.shared_secret);

    send({5, {st_.cert ^ iahts_.take(sz().cert)}});

    recv(6);
    const auto c_r = field(6, 0) ^ rahts_.take(sz().kem);
    stage3(kem_.decaps(st_.long_term.sk, c_r));

    const auto tag_i = finish_tag(false);
    const auto s4 = BitString::random(seed_len(4), rng_);
    send({7, {tag_i ^ iahts_.take(sz().tag), s4}});

    recv(8);
    const auto rf = field(8, 0) ^ rahts_.take(sz().tag);
    if (!finish_verify(true, rf)) throw AbortSignal{AbortReason::kMac, "RF rejected"};
    stage4();
  }

  void run_responder() {
    recv(1);
    const auto n_r = BitString::random(sz().nonce, rng_);
    const auto s1 = BitString::random(seed_len(1), rng_);
    const auto enc = kem_.encaps(field(1, 0), rng_);
    auto qkd = store_.get_key(lay_.schedule.qkd_budget);
    st_.consumed_qkd = qkd.key.size();
    send({2, {enc.ciphertext, qkd.id, n_r, s1}});
    stage1(enc.shared_secret, qkd.key);

    send({3, {st_.cert ^ rhts_.take(sz().cert)}});

    recv(4);
    const auto c_i = field(4, 0) ^ ihts_.take(sz().kem);
    stage2(kem_.decaps(st_.long_term.sk, c_i));

    recv(5);
    verify_cert(field(5, 0) ^ iahts_.take(sz().cert));

    const auto enc_r = kem_.encaps(pc_.peer_pk, rng_);
    const auto s3 = BitString::random(seed_len(3), rng_);
    send({6, {enc_r.ciphertext ^ rahts_.take(sz().kem), s3}});
    stage3(enc_r.shared_secret);

    recv(7);
    const auto tag_i = field(7, 0) ^ iahts_.take(sz().tag);
    if (!finish_verify(false, tag_i)) throw AbortSignal{AbortReason::kMac, "IF rejected"};

    send({8, {finish_tag(true) ^ rahts_.take(sz().tag)}});
    stage4();
  }

  const HandshakeLayout& lay_;
  const PartyConfig& pc_;
  MockQkdStore& store_;
  Channel& ch_;
  std::mt19937_64 rng_;
  MockKem kem_;
  HandshakeState st_;
  SourceSpec k1_spec_, k2_spec_, k3_spec_;
  PadCursor ihts_, rhts_, iahts_, rahts_;
};

}  // namespace detail

struct HandshakeResult {
  Outcome outcome;
  /// Present only when both parties completed.
  std::optional<Finals> initiator_finals;
  std::optional<Finals> responder_finals;
  HandshakeState initiator;
  HandshakeState responder;
  HandshakeLayout layout;
  bool tamper_applied = false;

  /// One "m<k> <hex>" line per message, initiator's view.
  std::string transcript_dump() const {
    std::string out;
    for (const auto& b : initiator.wire_log) {
      out += "m" + std::to_string(b.empty() ? 0 : b[0]) + " " + to_hex(b) + "\n";
    }
    return out;
  }
};

/// Runs the responder on its own thread and the initiator on the caller's.
inline HandshakeResult run_handshake(const HandshakeConfig& cfg, const PartyConfig& init,
                                     const PartyConfig& resp, MockQkdStore& store,
                                     const Tamper& tamper = {}) {
  HandshakeResult res;
  res.layout = plan_handshake(cfg);
  if (store.id_bits() != cfg.sizes.id) {
    throw Error(Errc::kInvalidArgument, "QKD store id size does not match the handshake");
  }
  Channel ch(tamper);
  HandshakeState resp_state;
  std::thread responder([&] {
    resp_state = detail::Party(Role::kResponder, res.layout, resp, store, ch).run();
  });
  res.initiator = detail::Party(Role::kInitiator, res.layout, init, store, ch).run();
  responder.join();
  res.responder = std::move(resp_state);
  res.tamper_applied = ch.tamper_applied();

  const auto& a = res.initiator.outcome;
  const auto& b = res.responder.outcome;
  if (a.success && b.success) {
    res.outcome.success = true;
    res.initiator_finals = res.initiator.finals;
    res.responder_finals = res.responder.finals;
  } else if (!a.success && a.reason != AbortReason::kChannelLoss) {
    res.outcome = a;
  } else if (!b.success && b.reason != AbortReason::kChannelLoss) {
    res.outcome = b;
  } else {
    res.outcome = a.success ? b : a;
  }
  return res;
}

}  // namespace qlhl
