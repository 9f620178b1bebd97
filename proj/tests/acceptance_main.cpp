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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. The first argument, if given, is where the combiner
// contrast report is written (default acceptance_report.kv).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mac_enum.hpp"
#include "oracle.hpp"
#include "qlhl/qlhl.hpp"

namespace {

using namespace qlhl;
using U128 = unsigned __int128;

SecurityLevel P(double bits) { return SecurityLevel::pow2(bits); }
const SecurityLevel kPerfect = SecurityLevel::perfect();

/// Collects the first few failure messages of one criterion.
struct Verdict {
  bool ok = true;
  std::size_t checks = 0;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (cond) return;
    ok = false;
    if (notes.size() < 5) notes.push_back(what);
  }
  template <class... Args>
  void expect(bool cond, Args&&... parts) {
    ++checks;
    if (cond) return;
    ok = false;
    if (notes.size() < 5) {
      std::ostringstream os;
      (os << ... << parts);
      notes.push_back(os.str());
    }
  }
};

/// f <= 2^(e/2), decided exactly by squaring.
bool at_most_half_pow2(const Fraction& f, int e) {
  const U128 num = U128{f.num()} * f.num();
  const U128 den = U128{f.den()} * f.den();
  if (f.num() >= (std::uint64_t{1} << 56) || f.den() >= (std::uint64_t{1} << 56)) {
    throw Error(Errc::kRange, "fraction too large for the exact square test");
  }
  return e >= 0 ? num <= (den << e) : (num << -e) <= den;
}

bool same_value(const Fraction& a, const oracle::Ratio& r) {
  return U128{a.num()} * r.den == r.num * U128{a.den()};
}

std::vector<std::uint32_t> iota_u32(std::size_t count, std::uint32_t step = 1) {
  std::vector<std::uint32_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = static_cast<std::uint32_t>(i * step);
  return v;
}

/// Flat sources of 2^k points in {0,1}^n: a random set, the low block
/// (top bits zero) and a coset-like block (low bits zero).
std::vector<std::vector<std::uint32_t>> flat_sources(std::size_t n, std::size_t k, std::mt19937_64& rng,
                                                     int random_sets) {
  std::vector<std::vector<std::uint32_t>> out;
  const std::size_t size = std::size_t{1} << k;
  out.push_back(iota_u32(size));
  out.push_back(iota_u32(size, 1u << (n - k)));
  auto all = iota_u32(std::size_t{1} << n);
  for (int r = 0; r < random_sets; ++r) {
    std::shuffle(all.begin(), all.end(), rng);
    out.emplace_back(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
  }
  return out;
}

// ---------------------------------------------------------------------------

Verdict universality() {
  Verdict v;
  for (std::size_t n = 2; n <= 8; ++n) {
    const std::uint64_t seeds = std::uint64_t{1} << (n - 1);
    for (std::size_t m = 1; m <= n; ++m) {
      // Oracle: seeds whose matrix sends each difference to zero.
      std::vector<std::uint64_t> kernel(std::size_t{1} << n, 0);
      for (std::uint64_t s = 0; s < seeds; ++s) {
        const auto h = oracle::modified_toeplitz(n, m, oracle::bits_of(s, n - 1));
        for (std::uint64_t d = 1; d < kernel.size(); ++d) {
          if (oracle::value_of(oracle::mul(h, oracle::bits_of(d, n))) == 0) ++kernel[d];
        }
      }
      const auto p = ExtractorParams::modified(n, m);
      for (std::uint64_t a = 0; a < kernel.size(); ++a) {
        for (std::uint64_t b = a + 1; b < kernel.size(); ++b) {
          const auto c = collision_probability(p, BitString::from_uint(a, n), BitString::from_uint(b, n));
          v.expect(c == Fraction(kernel[a ^ b], seeds), "n=", n, " m=", m, " pair ", a, ",", b,
                   " library ", c.to_string(), " oracle ", kernel[a ^ b], "/", seeds);
          v.expect(c.at_most_pow2(static_cast<unsigned>(m)), "n=", n, " m=", m, " pair ", a, ",", b,
                   " collides with ", c.to_string());
        }
      }
    }
  }
  return v;
}

Verdict leftover_hash() {
  Verdict v;
  std::mt19937_64 rng(2);
  for (std::size_t n = 2; n <= 12; ++n) {
    for (int t : {2, 4}) {
      for (std::size_t k = 1; k <= n; ++k) {
        // Uniform-seed bound at eps' = 2^-t with no smoothing: m = k - 2t + 2.
        const long m = static_cast<long>(k) - 2 * t + 2;
        if (m < 1 || m > static_cast<long>(n)) continue;
        const auto bound = qlhl_basic(static_cast<double>(k), kPerfect, P(t));
        v.expect(bound.max_output_len == m, "qlhl_basic(", k, ", 2^-", t, ") = ", bound.max_output_len,
                 ", expected ", m);
        const auto p = ExtractorParams::modified(n, static_cast<std::size_t>(m));
        const int random_sets = n <= 10 ? 3 : 1;
        for (const auto& support : flat_sources(n, k, rng, random_sets)) {
          const auto d = flat_extraction_distance(p, support);
          v.expect(d.at_most_pow2(static_cast<unsigned>(t)), "n=", n, " k=", k, " m=", m,
                   " distance ", d.to_string(), " > 2^-", t);
          v.expect(at_most_half_pow2(d, static_cast<int>(m) - static_cast<int>(k) - 2), "n=", n, " k=", k,
                   " m=", m, " distance ", d.to_string(), " > sqrt(2^(m-k))/2");
          if (n <= 8) {
            std::vector<std::uint64_t> sup(support.begin(), support.end());
            std::vector<std::uint64_t> seeds(std::size_t{1} << (n - 1));
            std::iota(seeds.begin(), seeds.end(), 0);
            v.expect(same_value(d, oracle::flat_distance(n, static_cast<std::size_t>(m), sup, seeds)),
                     "n=", n, " k=", k, " m=", m, " library and oracle distances differ");
          }
        }
      }
    }
  }
  return v;
}

/// Weak seeds are flat on 2^(d - lambda) of the 2^d seeds. For a fixed
/// source the worst such set is the one holding the individually worst
/// seeds, so that set is always among those tried.
Verdict weak_seed() {
  Verdict v;
  std::mt19937_64 rng(3);
  for (std::size_t d = 3; d <= 10; ++d) {
    const std::size_t n = d + 1;
    for (int t : {1, 2, 4}) {
      for (std::size_t k = 1; k <= n; ++k) {
        const long m = static_cast<long>(k) - 2 * t + 2;
        if (m < 1 || m > static_cast<long>(n)) continue;
        const auto p = ExtractorParams::modified(n, static_cast<std::size_t>(m));
        for (const auto& support : flat_sources(n, k, rng, d <= 8 ? 2 : 1)) {
          std::vector<std::pair<double, std::uint32_t>> per_seed;
          for (std::uint32_t s = 0; s < (1u << d); ++s) {
            const std::uint32_t one[] = {s};
            per_seed.emplace_back(flat_extraction_distance(p, support, one).to_double(), s);
          }
          std::sort(per_seed.begin(), per_seed.end(), std::greater<>());
          for (int lambda : {1, 2, 3}) {
            if (static_cast<std::size_t>(lambda) >= d) continue;
            const std::size_t keep = std::size_t{1} << (d - lambda);
            std::vector<std::vector<std::uint32_t>> seed_sets;
            seed_sets.emplace_back();
            for (std::size_t i = 0; i < keep; ++i) seed_sets.back().push_back(per_seed[i].second);
            seed_sets.push_back(iota_u32(keep));
            auto all = iota_u32(std::size_t{1} << d);
            std::shuffle(all.begin(), all.end(), rng);
            seed_sets.emplace_back(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep));

            // Penalty target 2^lambda * 2^-t, and the weak-seed form of the
            // leftover hash bound sqrt(2^(m - k + lambda)) / 2.
            const int penalty_exp = t - lambda;
            const int collision_half_exp = static_cast<int>(m) - static_cast<int>(k) + lambda - 2;
            // The collision-based value is never looser than the penalty.
            v.expect(collision_half_exp <= -2 * penalty_exp, "d=", d, " lambda=", lambda,
                     " collision bound above the 2^lambda penalty");
            for (const auto& seeds : seed_sets) {
              const auto dist = flat_extraction_distance(p, support, seeds);
              const bool within_penalty = penalty_exp >= 0 ? dist.at_most_pow2(static_cast<unsigned>(penalty_exp))
                                          : at_most_half_pow2(dist, -2 * penalty_exp);
              v.expect(within_penalty, "d=", d, " k=", k, " m=", m, " lambda=", lambda, " distance ", dist.to_string(),
                       " > 2^lambda eps");
              v.expect(at_most_half_pow2(dist, collision_half_exp), "d=", d, " k=", k, " m=", m, " lambda=", lambda,
                       " distance ", dist.to_string(), " > sqrt(2^(m-k+lambda))/2");
            }
          }
        }
      }
    }
  }
  return v;
}

/// Sizes are log-uniform up to 4096 so every scale is exercised while the
/// entry-by-entry reference stays affordable.
Verdict fast_path() {
  Verdict v;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> scale(0.0, 12.0);
  std::size_t at_max = 0;
  for (int i = 0; i < 10000; ++i) {
    std::size_t n = std::clamp<std::size_t>(static_cast<std::size_t>(std::exp2(scale(rng))), 1, 4096);
    if (i % 500 == 0) n = 4096;
    at_max += n == 4096;
    const std::size_t m = 1 + rng() % n;
    const auto p = i % 4 == 3 ? ExtractorParams::regular(n, m) : ExtractorParams::modified(n, m);
    const SeededHash h(p, BitString::random(p.seed_len, rng));
    const auto x = BitString::random(n, rng);
    v.expect(extract_fast(h, x) == extract(h, x), "case ", i, " n=", n, " m=", m, " family ",
             family_name(p.family), " mismatch");
  }
  v.expect(at_max >= 20, "too few cases at n = 4096");
  return v;
}

Verdict fixtures() {
  Verdict v;
  // Independent arithmetic: h - 2 log(1/eps) + 2, etc.
  v.expect(qlhl_basic(100, kPerfect, P(32)).max_output_len == 100 - 64 + 2, "qlhl_basic(100, 2^-32)");
  v.expect(qlhl_general(80, kPerfect, 50, kPerfect, 63, P(20)).max_output_len == 80 + 50 - 63 - 40 + 2,
           "qlhl_general(80, 50, 63, 2^-20)");
  v.expect(public_seed_bound(128, 256, kPerfect, kPerfect, kPerfect, P(32), true).max_output_len ==
               128 - 64 + 2,
           "public seed min rule (128, 256, 2^-32)");
  v.expect(combine_case_bound(ThreatCase::kNoReveal, 256, 256, kPerfect, kPerfect, P(32)).max_output_len ==
               256 - 64 + 2,
           "no-reveal (256, 256, 2^-32)");
  v.expect(combine_case_bound(ThreatCase::kRevealedKey, 256, 256, kPerfect, kPerfect, P(32)).max_output_len ==
               128 - 64 + 2,
           "revealed-key (256, 256, 2^-32)");
  v.expect(qlhl_basic(100, kPerfect, P(32)).max_output_len == 38, "38");
  v.expect(qlhl_general(80, kPerfect, 50, kPerfect, 63, P(20)).max_output_len == 29, "29");
  v.expect(combine_case_bound(ThreatCase::kNoReveal, 256, 256, kPerfect, kPerfect, P(32)).max_output_len == 194,
           "194");
  v.expect(combine_case_bound(ThreatCase::kRevealedKey, 256, 256, kPerfect, kPerfect, P(32)).max_output_len == 66,
           "66");
  return v;
}

Verdict controlled_key() {
  Verdict v;
  std::mt19937_64 rng(6);
  std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
  while (pairs.size() < 1000) pairs.emplace(1 + rng() % 8192, 1 + rng() % 8192);
  for (const auto& [l1, l2] : pairs) {
    for (double e : {2.0, 2.5, 3.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
      const auto r = combine_case_bound(ThreatCase::kControlledKey, static_cast<double>(l1),
                                        static_cast<double>(l2), kPerfect, kPerfect, P(e));
      v.expect(!r.feasible, "controlled key feasible at l1=", l1, " l2=", l2, " eps'=2^-", e);
    }
  }
  return v;
}

Verdict budget_formula() {
  Verdict v;
  v.expect(budget(256, P(64)).qkd_budget == 2808, "budget(256, 2^-64) = ", budget(256, P(64)).qkd_budget);
  v.expect(budget(128, P(32)).qkd_budget == 1400, "budget(128, 2^-32) = ", budget(128, P(32)).qkd_budget);
  for (std::size_t n = 1; n <= 512; ++n) {
    for (int t : {1, 2, 8, 16, 32, 64, 128}) {
      const auto got = budget(KeyLengths::uniform(n), P(t)).qkd_budget;
      v.expect(got == 9 * n - 8 + 8 * static_cast<std::size_t>(t), "n=", n, " t=", t, " budget ", got);
    }
  }
  return v;
}

Verdict handshake(double& sweep_seconds, std::size_t& sweep_runs) {
  Verdict v;
  std::mt19937_64 rng(8);
  for (int run = 0; run < 100; ++run) {
    HandshakeConfig cfg;
    cfg.n = 64 + rng() % 97;
    cfg.eps_prime = P(static_cast<double>(8 + rng() % 25));
    const bool weak = run % 2 == 1;
    cfg.eps_seed = weak ? P(static_cast<double>(30 + rng() % 40)) : kPerfect;
    const SecurityLevel eps_qkd = weak ? P(static_cast<double>(30 + rng() % 40)) : kPerfect;
    const std::uint64_t seed = rng();
    const auto fx = make_fixture(cfg, seed);
    MockQkdStore store(seed ^ 0xa5a5, cfg.sizes.id, eps_qkd);
    const auto res = run_handshake(cfg, fx.initiator, fx.responder, store);
    v.expect(res.outcome.success, "run ", run, ": ", res.outcome.to_string());
    if (!res.outcome.success) continue;
    const auto& a = *res.initiator_finals;
    const auto& b = *res.responder_finals;
    v.expect(a.iats == b.iats && a.rats == b.rats && a.sec_state == b.sec_state, "run ", run, " finals differ");
    v.expect(a.iats.size() == cfg.n && a.rats.size() == cfg.n && a.sec_state.size() == cfg.n, "run ", run,
             " final sizes");
    v.expect(res.initiator.consumed_qkd == res.layout.schedule.qkd_budget &&
                 res.responder.consumed_qkd == res.layout.schedule.qkd_budget &&
                 res.layout.schedule.qkd_budget == budget(res.layout.schedule.lengths, cfg.eps_prime).qkd_budget,
             "run ", run, " consumed ", res.initiator.consumed_qkd, " budget ", res.layout.schedule.qkd_budget);
    // The finish keys are sized by the MAC, so the tuple is not uniform in n.
    const auto& L = res.layout.schedule.lengths;
    v.expect(L.iats == cfg.n && L.rats == cfg.n && L.sec_state == cfg.n && L.ihts == cfg.n && L.rhts == cfg.n &&
                 L.iahts == cfg.n && L.rahts == cfg.n &&
                 L.fk_i == res.layout.fk_len(res.layout.traffic_bits[2]) &&
                 L.fk_r == res.layout.fk_len(res.layout.traffic_bits[3]),
             "run ", run, " key lengths");
    SecurityLevel want = eps_qkd;
    for (int i = 0; i < 4; ++i) want = want + cfg.eps_seed + cfg.eps_prime;
    const double got = a.spec.eps().neg_log2();
    v.expect(std::fabs(got - want.neg_log2()) <= 1e-9, "run ", run, " eps ledger 2^-", got, " want 2^-",
             want.neg_log2());
  }

  const auto t0 = std::chrono::steady_clock::now();
  HandshakeConfig cfg;
  const auto fx = make_fixture(cfg, 99);
  auto clean = [&] {
    MockQkdStore store(0x51d, cfg.sizes.id);
    return run_handshake(cfg, fx.initiator, fx.responder, store);
  }();
  v.expect(clean.outcome.success, "toy clean run: ", clean.outcome.to_string());
  sweep_runs = 0;
  for (const auto& record : clean.initiator.wire_log) {
    const int type = record.at(0);
    for (std::size_t bit = 0; bit < record.size() * 8; ++bit) {
      MockQkdStore store(0x51d, cfg.sizes.id);
      const auto res = run_handshake(cfg, fx.initiator, fx.responder, store, Tamper::flip(type, bit));
      ++sweep_runs;
      v.expect(res.tamper_applied, "m", type, " bit ", bit, " not applied");
      v.expect(!res.outcome.success && !res.initiator_finals && !res.responder_finals, "m", type, " bit ", bit,
               " reached finals");
    }
  }
  sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.expect(sweep_seconds < 60, "tamper sweep took ", sweep_seconds, " s");
  return v;
}

Verdict mac_forgery() {
  Verdict v;
  const Fraction limit(1, 16);
  for (std::size_t len = 1; len <= 10; ++len) {
    const auto reduced = mac_enum::reduced_worst(len, 4);
    v.expect(reduced == limit, "|m|=", len, " worst forgery ", reduced.to_string());
    if (len <= 7) {
      const auto literal = mac_enum::literal_worst(len, 4);
      v.expect(literal == reduced, "|m|=", len, " literal ", literal.to_string(), " reduced ",
               reduced.to_string());
    }
  }
  return v;
}

/// key1 is uniform on l1 bits and key2 is fixed and public. With the output
/// published too, the average min-entropy left in key1 is
/// l1 - log2(#distinct outputs), measured here by enumerating key1.
double measured_residual(std::size_t l1, const std::function<BitString(const BitString&)>& out_of) {
  std::set<std::string> outs;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << l1); ++k) outs.insert(out_of(BitString::from_uint(k, l1)).to_hex());
  return static_cast<double>(l1) - std::log2(static_cast<double>(outs.size()));
}

Verdict xor_contrast(const std::string& report_path) {
  Verdict v;
  KvDoc kv;
  std::mt19937_64 rng(10);

  // Library view at a realistic size.
  const std::size_t l1 = 256, l2 = 255;
  const double lambda = 64;
  CombineRequest req;
  req.keys = {{BitString::random(l1, rng), SourceSpec::secure("key1", l1)},
              {BitString::random(l2, rng), SourceSpec::secure("key2", l2)}};
  req.independence = Independence::assert_mutual({"key1", "key2"});
  req.eps_hash = P(32);
  req.threat = ThreatCase::kRevealOutputAndKey;
  req.lambdas = {lambda, lambda};
  const auto res = combine_private(req);
  const auto x1 = BitString::random(l2, rng), x2 = BitString::random(l2, rng);
  const auto xr = xor_residual_after_reveal(SourceSpec::secure("key1", l2), lambda);
  v.expect((xor_combine_baseline(x1, x2) ^ x2) == x1, "xor output and key2 do not give back key1");
  v.expect(xr.remaining_hmin == 0 && !xr.satisfied, "xor residual ", xr.remaining_hmin);
  v.expect(res.output.size() <= l1 - lambda, "output ", res.output.size(), " breaks the compression rule");
  v.expect(res.residuals.at(0).remaining_hmin >= lambda && res.residuals.at(0).satisfied, "extractor residual ",
           res.residuals.at(0).remaining_hmin);
  kv.set("library.key1_len", l1);
  kv.set("library.key2_len", l2);
  kv.set("library.lambda1", lambda);
  kv.set("library.eps_hash", req.eps_hash.to_string());
  kv.set("library.extractor.output_len", res.output.size());
  kv.set("library.extractor.key1_residual_hmin", res.residuals.at(0).remaining_hmin);
  kv.set("library.extractor.key1_residual_ok", res.residuals.at(0).satisfied);
  kv.set("library.xor.output_len", l2);
  kv.set("library.xor.key1_residual_hmin", xr.remaining_hmin);
  kv.set("library.xor.key1_residual_ok", xr.satisfied);

  // Measured view on a toy instance small enough to enumerate key1.
  const std::size_t t1 = 12, t2 = 11;
  const double t_lambda = 4;
  CombineRequest toy;
  toy.independence = Independence::assert_mutual({"key1", "key2"});
  toy.eps_hash = P(1);
  toy.threat = ThreatCase::kRevealOutputAndKey;
  toy.lambdas = {t_lambda, t_lambda};
  toy.keys = {{BitString(t1), SourceSpec::secure("key1", t1)},
              {BitString::random(t2, rng), SourceSpec::secure("key2", t2)}};
  const auto toy_len = combine_private(toy).output.size();
  double worst_extractor = static_cast<double>(t1), worst_xor = static_cast<double>(t2);
  for (int trial = 0; trial < 4; ++trial) {
    const auto key2 = BitString::random(t2, rng);
    toy.keys[1].bits = key2;
    worst_extractor = std::min(worst_extractor, measured_residual(t1, [&](const BitString& k1) {
                                 auto r = toy;
                                 r.keys[0].bits = k1;
                                 return combine_private(r).output;
                               }));
    worst_xor = std::min(worst_xor, measured_residual(t2, [&](const BitString& k1) {
                           return xor_combine_baseline(k1, key2);
                         }));
  }
  v.expect(toy_len <= t1 - t_lambda, "toy output ", toy_len, " breaks the compression rule");
  v.expect(worst_xor == 0, "measured xor residual ", worst_xor);
  v.expect(worst_extractor >= t_lambda, "measured extractor residual ", worst_extractor);
  v.expect(worst_extractor >= static_cast<double>(t1 - toy_len) - 1e-9, "measured extractor residual ",
           worst_extractor, " below l1 - m");
  kv.set("measured.key1_len", t1);
  kv.set("measured.key2_len", t2);
  kv.set("measured.lambda1", t_lambda);
  kv.set("measured.extractor.output_len", toy_len);
  kv.set("measured.extractor.key1_residual_hmin", worst_extractor);
  kv.set("measured.xor.key1_residual_hmin", worst_xor);
  kv.set("contrast_holds", v.ok);
  kv.save(report_path);
  v.notes.insert(v.notes.begin(), "report: " + report_path);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string report = argc > 1 ? argv[1] : "acceptance_report.kv";
  bool all = true;
  auto run = [&](int id, const char* name, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v.ok = false;
      v.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-28s checks=%-9zu %.2fs\n", v.ok ? "PASS" : "FAIL", id, name, v.checks, secs);
    for (const auto& n : v.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
    all = all && v.ok;
  };

  run(1, "universality", universality);
  run(2, "leftover-hash-distance", leftover_hash);
  run(3, "weak-seed-penalty", weak_seed);
  run(4, "fast-path-equivalence", fast_path);
  run(5, "bound-fixtures", fixtures);
  run(6, "controlled-key-impossible", controlled_key);
  run(7, "budget-formula", budget_formula);
  double sweep_seconds = 0;
  std::size_t sweep_runs = 0;
  run(8, "handshake-end-to-end", [&] {
    auto v = handshake(sweep_seconds, sweep_runs);
    v.notes.push_back("tamper sweep: " + std::to_string(sweep_runs) + " runs in " +
                      std::to_string(sweep_seconds) + " s");
    return v;
  });
  run(9, "mac-forgery", mac_forgery);
  run(10, "xor-baseline-contrast", [&] { return xor_contrast(report); });
  return all ? 0 : 1;
}
