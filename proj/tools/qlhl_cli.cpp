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

// qlhl: command-line front end.
//
// Exit codes: 0 success, 2 infeasible (or a MAC that does not verify),
// 1 any other error. Every subcommand accepts --report <path> for a flat
// key-value report and --verbose for the bound's term breakdown on stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qlhl/qlhl.hpp"

namespace {

using namespace qlhl;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;

struct Globals {
  std::string report;
  bool verbose = false;
  std::uint64_t rng_seed = 0;
};

/// Epsilon flag: "2^-N", "2^X", "inf", "0" or a decimal.
struct EpsArg {
  std::string text = "inf";
  SecurityLevel value() const { return SecurityLevel::parse(text); }
};

void add_eps(CLI::App* app, const std::string& name, EpsArg& arg, const std::string& help,
             bool required = false) {
  auto* o = app->add_option(name, arg.text, help);
  if (required) o->required();
}

void emit_report(const Globals& g, const KvDoc& kv) {
  if (!g.report.empty()) kv.save(g.report);
}

void print_terms(const Globals& g, const BoundReport& r) {
  if (!g.verbose) return;
  for (const auto& [k, v] : r.terms) std::cerr << k << " = " << format_double(v) << "\n";
  std::cerr << "out_eps = " << r.out_eps.to_string() << "\n";
}

int finish_bound_cmd(const Globals& g, const BoundReport& r) {
  print_terms(g, r);
  emit_report(g, r.to_kv());
  std::cout << r.max_output_len << "\n";
  return r.feasible ? kOk : kInfeasible;
}

std::string bits_text(const BitString& b) {
  return b.size() <= 4096 ? b.to_string() : b.to_hex();
}

/// A source from a descriptor file, or from inline length and min-entropy.
SourceSpec source_arg(const std::string& path, const std::string& label, std::size_t len, double hmin) {
  if (!path.empty()) return SourceSpec::from_kv(KvDoc::load(path));
  if (len == 0 || hmin < 0) {
    throw Error(Errc::kInvalidArgument, "give --" + label + " or both --" + label + "-len and --" + label + "-hmin");
  }
  return SourceSpec(label, len, hmin);
}

// ---------------------------------------------------------------------------

void add_bits(CLI::App& app, Globals& g, std::function<int()>& action) {
  auto* bits = app.add_subcommand("bits", "Create and inspect .qbits files")->require_subcommand(1);
  {
    auto* c = bits->add_subcommand("encode", "Write a .qbits file from 0/1 text or hex");
    auto* text = c->add_option("--bits", "Bits as 0/1 characters");
    auto* hex = c->add_option("--hex", "Bits as hex digits (requires --nbits)");
    auto* nbits = c->add_option("--nbits", "Bit count for --hex");
    auto* out = c->add_option("--out", "Output path")->required();
    text->excludes(hex);
    c->callback([&g, &action, text, hex, nbits, out] {
      action = [&g, text, hex, nbits, out] {
        BitString b;
        if (*text) {
          b = BitString::from_string(text->as<std::string>());
        } else if (*hex && *nbits) {
          b = BitString::from_hex(hex->as<std::string>(), nbits->as<std::size_t>());
        } else {
          throw Error(Errc::kInvalidArgument, "give --bits, or --hex with --nbits");
        }
        write_qbits(out->as<std::string>(), b);
        KvDoc kv;
        kv.set("bits", b.size());
        emit_report(g, kv);
        std::cout << b.size() << "\n";
        return kOk;
      };
    });
  }
  {
    auto* c = bits->add_subcommand("show", "Print the bits of a .qbits file");
    auto* in = c->add_option("--in", "Input path")->required();
    auto* as_hex = c->add_flag("--hex", "Print hex instead of 0/1");
    c->callback([&g, &action, in, as_hex] {
      action = [&g, in, as_hex] {
        const auto b = read_qbits(in->as<std::string>());
        std::cout << (*as_hex ? b.to_hex() : b.to_string()) << "\n";
        KvDoc kv;
        kv.set("bits", b.size());
        emit_report(g, kv);
        return kOk;
      };
    });
  }
}

void add_extract(CLI::App& app, Globals& g, std::function<int()>& action) {
  struct Opts {
    std::string family = "modified-toeplitz", in, seed, out;
    std::size_t m = 0;
    bool naive = false;
  };
  static Opts o;
  auto* c = app.add_subcommand("extract", "Hash an input under a seeded Toeplitz matrix");
  c->add_option("--family", o.family, "modified-toeplitz or regular-toeplitz");
  c->add_option("--in", o.in, "Input .qbits")->required();
  c->add_option("--seed", o.seed, "Seed .qbits")->required();
  c->add_option("--m", o.m, "Output length")->required();
  c->add_option("--out", o.out, "Output .qbits");
  c->add_flag("--naive", o.naive, "Use the entry-by-entry reference path");
  c->callback([&g, &action] {
    action = [&g] {
      const auto x = read_qbits(o.in);
      const auto s = read_qbits(o.seed);
      const auto fam = parse_family(o.family);
      const auto p = fam == Family::kModifiedToeplitz ? ExtractorParams::modified(x.size(), o.m)
                                                      : ExtractorParams::regular(x.size(), o.m);
      const SeededHash h(p, s);
      const auto z = o.naive ? extract(h, x) : extract_fast(h, x);
      if (!o.out.empty()) write_qbits(o.out, z);
      std::cout << bits_text(z) << "\n";
      KvDoc kv;
      kv.set("family", family_name(fam));
      kv.set("input_len", p.input_len);
      kv.set("output_len", p.output_len);
      kv.set("seed_len", p.seed_len);
      kv.set("output_hex", z.to_hex());
      emit_report(g, kv);
      return kOk;
    };
  });
}

void add_bound(CLI::App& app, Globals& g, std::function<int()>& action) {
  auto* bound = app.add_subcommand("bound", "Evaluate output-length bounds")->require_subcommand(1);
  {
    struct Opts {
      double hmin = 0;
      EpsArg eps, eps_smooth;
      std::string kind = "min";
    };
    static Opts o;
    auto* c = bound->add_subcommand("qlhl", "Uniform seed");
    c->add_option("--hmin", o.hmin, "Input min-entropy in bits")->required();
    add_eps(c, "--eps", o.eps, "Hashing eps", true);
    add_eps(c, "--eps-smooth", o.eps_smooth, "Smoothing eps of the input");
    c->add_option("--kind", o.kind, "min, smooth or hill");
    c->callback([&g, &action] {
      action = [&g] {
        return finish_bound_cmd(
            g, qlhl_basic(o.hmin, o.eps_smooth.value(), o.eps.value(), parse_kind(o.kind)));
      };
    });
  }
  {
    struct Opts {
      double hmin = 0, seed_len = 0, seed_hmin = 0;
      EpsArg eps, eps_smooth;
    };
    static Opts o;
    auto* c = bound->add_subcommand("weak-seed", "Weak seed, eps scaled by 2^deficiency");
    c->add_option("--hmin", o.hmin, "Input min-entropy")->required();
    c->add_option("--seed-len", o.seed_len, "Seed length")->required();
    c->add_option("--seed-hmin", o.seed_hmin, "Seed min-entropy")->required();
    add_eps(c, "--eps", o.eps, "Target eps", true);
    add_eps(c, "--eps-smooth", o.eps_smooth, "Smoothing eps of the input");
    c->callback([&g, &action] {
      action = [&g] {
        return finish_bound_cmd(g, qlhl_weak_seed_penalized(o.hmin, o.eps_smooth.value(), o.seed_len,
                                                            o.seed_hmin, o.eps.value()));
      };
    });
  }
  {
    struct Opts {
      double hmin = 0, seed_len = 0, seed_hmin = 0;
      EpsArg eps, eps_in, eps_seed;
    };
    static Opts o;
    auto* c = bound->add_subcommand("general", "Smoothed input and smoothed weak seed");
    c->add_option("--hmin", o.hmin, "Input min-entropy")->required();
    add_eps(c, "--eps-in", o.eps_in, "Smoothing eps of the input");
    c->add_option("--seed-hmin", o.seed_hmin, "Seed min-entropy")->required();
    add_eps(c, "--eps-seed", o.eps_seed, "Smoothing eps of the seed");
    c->add_option("--seed-len", o.seed_len, "Seed length")->required();
    add_eps(c, "--eps", o.eps, "Hashing eps", true);
    c->callback([&g, &action] {
      action = [&g] {
        return finish_bound_cmd(g, qlhl_general(o.hmin, o.eps_in.value(), o.seed_hmin,
                                                o.eps_seed.value(), o.seed_len, o.eps.value()));
      };
    });
  }
  {
    struct Opts {
      std::string threat = "no-reveal";
      double l1 = 0, l2 = 0, lambda1 = 0, lambda2 = 0;
      EpsArg eps, eps1, eps2;
    };
    static Opts o;
    auto* c = bound->add_subcommand("case", "Private-seed combining under a threat case");
    c->add_option("--threat", o.threat,
                  "no-reveal, controlled, revealed-key, reveal-output or reveal-both");
    c->add_option("--l1", o.l1, "Length of key 1")->required();
    c->add_option("--l2", o.l2, "Length of key 2")->required();
    add_eps(c, "--eps1", o.eps1, "Eps of key 1");
    add_eps(c, "--eps2", o.eps2, "Eps of key 2");
    add_eps(c, "--eps", o.eps, "Hashing eps", true);
    c->add_option("--lambda1", o.lambda1, "Residual entropy key 1 must keep");
    c->add_option("--lambda2", o.lambda2, "Residual entropy key 2 must keep");
    c->callback([&g, &action] {
      action = [&g] {
        return finish_bound_cmd(g, combine_case_bound(parse_threat(o.threat), o.l1, o.l2, o.eps1.value(),
                                                      o.eps2.value(), o.eps.value(), o.lambda1,
                                                      o.lambda2));
      };
    });
  }
  {
    struct Opts {
      double l1 = 0, l2 = 0;
      EpsArg eps, eps1, eps2, eps_seed;
      bool reveal = false;
    };
    static Opts o;
    auto* c = bound->add_subcommand("public", "Public seed over both keys");
    c->add_option("--l1", o.l1, "Entropy of key 1")->required();
    c->add_option("--l2", o.l2, "Entropy of key 2")->required();
    add_eps(c, "--eps1", o.eps1, "Eps of key 1");
    add_eps(c, "--eps2", o.eps2, "Eps of key 2");
    add_eps(c, "--eps-seed", o.eps_seed, "Eps of the seed");
    add_eps(c, "--eps", o.eps, "Hashing eps", true);
    c->add_flag("--reveal", o.reveal, "Either key may be revealed later");
    c->callback([&g, &action] {
      action = [&g] {
        return finish_bound_cmd(g, public_seed_bound(o.l1, o.l2, o.eps1.value(), o.eps2.value(),
                                                     o.eps_seed.value(), o.eps.value(), o.reveal));
      };
    });
  }
}

void add_alpha(CLI::App& app, Globals& g, std::function<int()>& action) {
  static std::size_t l1 = 0, l2 = 0;
  auto* c = app.add_subcommand("alpha", "Seed/input split for private-seed combining");
  c->add_option("--l1", l1, "Length of key 1")->required();
  c->add_option("--l2", l2, "Length of key 2")->required();
  c->callback([&g, &action] {
    action = [&g] {
      const auto a = alpha_partition(l1, l2);
      std::cout << "alpha = " << a.alpha_num << "/" << a.alpha_den << " seed_len = " << a.seed_len
                << " input_len = " << a.input_len << "\n";
      KvDoc kv;
      kv.set("alpha_num", a.alpha_num);
      kv.set("alpha_den", a.alpha_den);
      kv.set("seed_len", a.seed_len);
      kv.set("input_len", a.input_len);
      emit_report(g, kv);
      return kOk;
    };
  });
}

void add_bootstrap(CLI::App& app, Globals& g, std::function<int()>& action) {
  auto* boot = app.add_subcommand("bootstrap", "Seed an extractor from two weak sources")
                   ->require_subcommand(1);
  {
    struct Opts {
      std::string x1, x2;
      std::size_t x1_len = 0, x2_len = 0, out_len = 0;
      double x1_hmin = -1, x2_hmin = -1;
      EpsArg eps;
      std::string seed_source = "auto", plan_out;
    };
    static Opts o;
    auto* c = boot->add_subcommand("plan", "Check feasibility and size the extraction");
    c->add_option("--x1", o.x1, "Source 1 descriptor (.kv)");
    c->add_option("--x2", o.x2, "Source 2 descriptor (.kv)");
    c->add_option("--x1-len", o.x1_len, "Length of source 1, instead of --x1");
    c->add_option("--x1-hmin", o.x1_hmin, "Min-entropy of source 1, instead of --x1");
    c->add_option("--x2-len", o.x2_len, "Length of source 2, instead of --x2");
    c->add_option("--x2-hmin", o.x2_hmin, "Min-entropy of source 2, instead of --x2");
    c->add_option("--out-len", o.out_len, "Output length")->required();
    add_eps(c, "--eps", o.eps, "Hashing eps", true);
    c->add_option("--seed-source", o.seed_source, "auto, x1 or x2");
    c->add_option("--plan-out", o.plan_out, "Write the plan here");
    c->callback([&g, &action] {
      action = [&g] {
        const auto x1 = source_arg(o.x1, "x1", o.x1_len, o.x1_hmin);
        const auto x2 = source_arg(o.x2, "x2", o.x2_len, o.x2_hmin);
        const SeedChoice choice = o.seed_source == "x1"   ? SeedChoice::kX1
                                  : o.seed_source == "x2" ? SeedChoice::kX2
                                  : o.seed_source == "auto"
                                      ? SeedChoice::kAuto
                                      : throw Error(Errc::kInvalidArgument, "seed source must be auto, x1 or x2");
        try {
          const auto plan = plan_bootstrap(x1, x2, o.out_len, o.eps.value(),
                                           Independence::assert_mutual({x1.label(), x2.label()}), choice);
          const auto kv = plan.to_kv();
          if (!o.plan_out.empty()) kv.save(o.plan_out);
          emit_report(g, kv);
          std::cout << kv.to_string();
          return kOk;
        } catch (const InfeasibleError& e) {
          KvDoc kv;
          kv.set("feasible", false);
          kv.set("shortfall_bits", e.shortfall_bits());
          emit_report(g, kv);
          std::cout << "infeasible: short by " << format_double(e.shortfall_bits()) << " bits\n";
          return kInfeasible;
        }
      };
    });
  }
  {
    struct Opts {
      std::string plan, x1, x2, out;
    };
    static Opts o;
    auto* c = boot->add_subcommand("run", "Extract with a saved plan");
    c->add_option("--plan", o.plan, "Plan file")->required();
    c->add_option("--x1-bits", o.x1, "Source 1 .qbits")->required();
    c->add_option("--x2-bits", o.x2, "Source 2 .qbits")->required();
    c->add_option("--out", o.out, "Output .qbits");
    c->callback([&g, &action] {
      action = [&g] {
        const auto plan = plan_from_kv(KvDoc::load(o.plan));
        const auto r = run_bootstrap(plan, read_qbits(o.x1), read_qbits(o.x2));
        if (!o.out.empty()) write_qbits(o.out, r.output);
        std::cout << bits_text(r.output) << "\n";
        KvDoc kv = plan.to_kv();
        kv.set("output_hex", r.output.to_hex());
        emit_report(g, kv);
        return kOk;
      };
    });
  }
  {
    struct Opts {
      std::size_t length = 0;
      double hmin = 0, bias = 0.5;
      std::string model = "flat", out;
    };
    static Opts o;
    auto* c = boot->add_subcommand("sample", "Draw from a simulated weak source");
    c->add_option("--length", o.length, "Bits to draw")->required();
    c->add_option("--hmin", o.hmin, "Declared min-entropy")->required();
    c->add_option("--model", o.model, "flat or biased");
    c->add_option("--bias", o.bias, "Probability of a 1 (biased model)");
    c->add_option("--out", o.out, "Output .qbits")->required();
    c->callback([&g, &action] {
      action = [&g] {
        const WeakSourceSim sim{o.length, o.hmin, parse_weak_model(o.model), o.bias, {}, g.rng_seed};
        const auto x = sample_weak_source(sim);
        write_qbits(o.out, x);
        KvDoc kv = sim.spec("sample").to_kv();
        kv.set("model", weak_model_name(sim.model));
        kv.set("true_hmin", sim.true_hmin());
        emit_report(g, kv);
        std::cout << x.size() << "\n";
        return kOk;
      };
    });
  }
}

void add_combine(CLI::App& app, Globals& g, std::function<int()>& action) {
  struct Opts {
    std::string key1, key2, spec1, spec2, seed, transcript, out, mode = "private", threat = "no-reveal",
        kind2 = "min";
    double h1 = -1, h2 = -1, lambda1 = 0, lambda2 = 0;
    EpsArg eps, eps1, eps2, eps_seed;
    std::size_t out_len = 0;
    bool auto_truncate = false, seed_after_keys = false;
  };
  static Opts o;
  auto* c = app.add_subcommand("combine", "Combine two keys with a seeded extractor");
  c->add_option("--key1", o.key1, "Key 1 .qbits")->required();
  c->add_option("--key2", o.key2, "Key 2 .qbits")->required();
  c->add_option("--spec1", o.spec1, "Descriptor (.kv) of key 1; overrides --h1/--eps1");
  c->add_option("--spec2", o.spec2, "Descriptor (.kv) of key 2; overrides --h2/--eps2/--kind2");
  c->add_option("--transcript", o.transcript, "Public transcript (.qbits) appended in public mode");
  c->add_option("--h1", o.h1, "Min-entropy of key 1 (default: its length)");
  c->add_option("--h2", o.h2, "Entropy of key 2 (default: its length)");
  c->add_option("--kind2", o.kind2, "Entropy kind of key 2: min, smooth or hill");
  add_eps(c, "--eps1", o.eps1, "Eps of key 1");
  add_eps(c, "--eps2", o.eps2, "Eps of key 2");
  add_eps(c, "--eps", o.eps, "Hashing eps", true);
  c->add_option("--mode", o.mode, "private or public");
  c->add_option("--seed", o.seed, "Public seed .qbits (default: drawn from --rng-seed)");
  add_eps(c, "--eps-seed", o.eps_seed, "Eps of the public seed");
  c->add_flag("--seed-after-keys", o.seed_after_keys, "Assert a supplied seed postdates the keys");
  c->add_option("--threat", o.threat, "Threat case");
  c->add_option("--lambda1", o.lambda1, "Residual entropy key 1 must keep");
  c->add_option("--lambda2", o.lambda2, "Residual entropy key 2 must keep");
  c->add_option("--out-len", o.out_len, "Requested output length (default: maximum)");
  c->add_flag("--auto-truncate", o.auto_truncate, "Drop a bit when the total length is even");
  c->add_option("--out", o.out, "Output .qbits");
  c->callback([&g, &action] {
    action = [&g] {
      auto k1 = read_qbits(o.key1);
      auto k2 = read_qbits(o.key2);
      CombineRequest req;
      const double h1 = o.h1 < 0 ? static_cast<double>(k1.size()) : o.h1;
      const double h2 = o.h2 < 0 ? static_cast<double>(k2.size()) : o.h2;
      const auto s1 = o.spec1.empty() ? SourceSpec("key1", k1.size(), h1, o.eps1.value())
                                      : SourceSpec::from_kv(KvDoc::load(o.spec1));
      const auto s2 = o.spec2.empty()
                          ? SourceSpec("key2", k2.size(), h2, o.eps2.value(), parse_kind(o.kind2))
                          : SourceSpec::from_kv(KvDoc::load(o.spec2));
      req.keys.push_back({k1, s1});
      req.keys.push_back({k2, s2});
      req.independence = Independence::assert_mutual({s1.label(), s2.label()});
      if (!o.transcript.empty()) req.transcript = read_qbits(o.transcript);
      req.eps_hash = o.eps.value();
      req.threat = parse_threat(o.threat);
      req.lambdas = {o.lambda1, o.lambda2};
      req.auto_truncate = o.auto_truncate;
      if (o.out_len != 0) req.requested_len = o.out_len;
      if (o.mode == "public") {
        req.mode = CombineMode::kPublicSeed;
        req.eps_seed = o.eps_seed.value();
        if (o.seed.empty()) {
          std::mt19937_64 rng(g.rng_seed);
          const std::size_t extra = req.transcript ? req.transcript->size() : 0;
          req.seed = BitString::random(k1.size() + k2.size() + extra - 1, rng);
          req.seed_after_keys = true;
        } else {
          req.seed = read_qbits(o.seed);
          req.seed_after_keys = o.seed_after_keys;
        }
      } else if (o.mode != "private") {
        throw Error(Errc::kInvalidArgument, "mode must be private or public");
      }
      const auto res = combine(req);
      print_terms(g, res.report);
      if (!o.out.empty()) write_qbits(o.out, res.output);
      auto kv = res.to_kv();
      kv.set("output_hex", res.output.to_hex());
      emit_report(g, kv);
      std::cout << bits_text(res.output) << "\n";
      return kOk;
    };
  });
}

void add_budget(CLI::App& app, Globals& g, std::function<int()>& action) {
  struct Opts {
    std::size_t n = 0;
    EpsArg eps;
    std::vector<std::size_t> lengths;
  };
  static Opts o;
  auto* c = app.add_subcommand("budget", "QKD key needed by the four-stage key schedule");
  c->add_option("--n", o.n, "Length of each derived key");
  add_eps(c, "--eps", o.eps, "Per-stage eps'", true);
  c->add_option("--lengths", o.lengths,
                "Nine lengths: IATS RATS SecState' fk_I fk_R IAHTS RAHTS IHTS RHTS")
      ->delimiter(',')
      ->expected(9);
  c->callback([&g, &action] {
    action = [&g] {
      ScheduleParams p;
      if (!o.lengths.empty()) {
        const auto& l = o.lengths;
        p = budget(KeyLengths{l[0], l[1], l[2], l[3], l[4], l[5], l[6], l[7], l[8]}, o.eps.value());
      } else {
        p = budget(o.n, o.eps.value());
      }
      if (g.verbose) std::cerr << p.to_kv().to_string();
      emit_report(g, p.to_kv());
      std::cout << p.qkd_budget << "\n";
      return kOk;
    };
  });
}

void add_handshake(CLI::App& app, Globals& g, std::function<int()>& action) {
  struct Opts {
    std::size_t n = 64;
    EpsArg eps{"2^-16"}, eps_seed, eps_qkd;
    std::string tamper, dump;
  };
  static Opts o;
  auto* hs = app.add_subcommand("handshake", "Protocol simulation")->require_subcommand(1);
  auto* c = hs->add_subcommand("simulate", "Run both parties over an in-memory channel");
  c->add_option("--n", o.n, "Derived key length");
  add_eps(c, "--eps", o.eps, "Per-stage eps' (2^-N, integer N)");
  add_eps(c, "--eps-seed", o.eps_seed, "Eps of each public seed");
  add_eps(c, "--eps-qkd", o.eps_qkd, "Eps of the QKD key");
  c->add_option("--tamper", o.tamper, "m<k>:bit<i> or close:<k>");
  c->add_option("--dump", o.dump, "Write the transcript here");
  c->callback([&g, &action] {
    action = [&g] {
      HandshakeConfig cfg;
      cfg.n = o.n;
      cfg.eps_prime = o.eps.value();
      cfg.eps_seed = o.eps_seed.value();
      const auto fx = make_fixture(cfg, g.rng_seed);
      MockQkdStore store(g.rng_seed ^ 0x51dULL, cfg.sizes.id, o.eps_qkd.value());
      const Tamper t = o.tamper.empty() ? Tamper{} : Tamper::parse(o.tamper);
      const auto res = run_handshake(cfg, fx.initiator, fx.responder, store, t);
      if (!o.dump.empty()) {
        std::ofstream f(o.dump);
        f << res.transcript_dump();
        if (!f) throw Error(Errc::kInvalidArgument, "cannot write " + o.dump);
      }
      KvDoc kv = res.layout.to_kv();
      kv.set("outcome", res.outcome.to_string());
      if (!o.tamper.empty()) kv.set("tamper_applied", res.tamper_applied);
      kv.set("consumed_qkd", res.initiator.consumed_qkd);
      if (res.outcome.success) {
        const auto& f = *res.initiator_finals;
        kv.set("finals_equal", f.iats == res.responder_finals->iats &&
                                   f.rats == res.responder_finals->rats &&
                                   f.sec_state == res.responder_finals->sec_state);
        kv.set("iats", f.iats.to_hex());
        kv.set("rats", f.rats.to_hex());
        kv.set("sec_state_next", f.sec_state.to_hex());
        kv.set("finals_eps", f.spec.eps().to_string());
      }
      if (g.verbose) std::cerr << kv.to_string();
      emit_report(g, kv);
      if (!o.tamper.empty() && !res.tamper_applied) std::cout << "tamper not applied: " << o.tamper << "\n";
      std::cout << res.outcome.to_string() << "\n"
                << "qkd_budget " << res.layout.schedule.qkd_budget << "\n";
      if (res.outcome.success) std::cout << "IATS " << res.initiator_finals->iats.to_hex() << "\n";
      return res.outcome.success ? kOk : kError;
    };
  });
}

void add_mac(CLI::App& app, Globals& g, std::function<int()>& action) {
  struct Opts {
    std::string key, msg, tag, out;
    std::size_t tag_len = 32;
  };
  static Opts o;
  auto* mac = app.add_subcommand("mac", "One-time information-theoretic MAC")->require_subcommand(1);
  auto* a = mac->add_subcommand("auth", "Compute a tag");
  auto* v = mac->add_subcommand("verify", "Check a tag");
  for (auto* c : {a, v}) {
    c->add_option("--key", o.key, "Key .qbits: hash seed || pad")->required();
    c->add_option("--msg", o.msg, "Message .qbits")->required();
    c->add_option("--tag-len", o.tag_len, "Tag length in bits");
  }
  a->add_option("--out", o.out, "Tag .qbits");
  v->add_option("--tag", o.tag, "Tag .qbits")->required();
  a->callback([&g, &action] {
    action = [&g] {
      const auto msg = read_qbits(o.msg);
      const auto key = mac_key_from_bits(read_qbits(o.key), msg.size(), o.tag_len);
      const auto t = its_mac_auth(key, msg);
      if (!o.out.empty()) write_qbits(o.out, t);
      KvDoc kv;
      kv.set("tag_hex", t.to_hex());
      kv.set("key_len", mac_key_len(msg.size(), o.tag_len));
      emit_report(g, kv);
      std::cout << t.to_string() << "\n";
      return kOk;
    };
  });
  v->callback([&g, &action] {
    action = [&g] {
      const auto msg = read_qbits(o.msg);
      const auto tag = read_qbits(o.tag);
      const auto key = mac_key_from_bits(read_qbits(o.key), msg.size(), tag.size());
      const bool ok = its_mac_verify(key, msg, tag);
      KvDoc kv;
      kv.set("valid", ok);
      emit_report(g, kv);
      std::cout << (ok ? "valid" : "invalid") << "\n";
      return ok ? kOk : kInfeasible;
    };
  });
}

/// Small exhaustive checks that finish in a few seconds.
int selftest(const Globals& g) {
  KvDoc kv;
  bool all = true;
  auto record = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    kv.set(name, ok);
    all = all && ok;
  };

  bool universal = true;
  for (std::size_t n = 2; n <= 6 && universal; ++n) {
    for (std::size_t m = 1; m <= n && universal; ++m) {
      const auto p = ExtractorParams::modified(n, m);
      for (std::uint64_t a = 0; a < (1u << n) && universal; ++a) {
        for (std::uint64_t b = a + 1; b < (1u << n); ++b) {
          const auto c = collision_probability(p, BitString::from_uint(a, n), BitString::from_uint(b, n));
          if (!c.at_most_pow2(static_cast<unsigned>(m))) {
            universal = false;
            break;
          }
        }
      }
    }
  }
  record("universality_n_le_6", universal);

  std::mt19937_64 rng(g.rng_seed);
  bool same = true;
  for (int i = 0; i < 500 && same; ++i) {
    const std::size_t n = 1 + rng() % 300, m = 1 + rng() % n;
    const auto p = i % 2 ? ExtractorParams::modified(n, m) : ExtractorParams::regular(n, m);
    const SeededHash h(p, BitString::random(p.seed_len, rng));
    const auto x = BitString::random(n, rng);
    same = extract(h, x) == extract_fast(h, x);
  }
  record("fast_path_matches_reference", same);

  bool forgery = true;
  for (std::size_t len = 1; len <= 6 && forgery; ++len) {
    std::vector<std::uint32_t> count(std::size_t{1} << (len + 2), 0);
    const std::size_t d = mac_seed_len(len, 2);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << d); ++s) {
      const MacKey key{BitString::from_uint(s, d), BitString(2)};
      for (std::uint64_t delta = 1; delta < (1u << len); ++delta) {
        ++count[delta << 2 | its_mac_auth(key, BitString::from_uint(delta, len)).to_uint()];
      }
    }
    for (auto c : count) forgery = forgery && std::uint64_t{c} * 4 <= (std::uint64_t{1} << d);
  }
  record("mac_forgery_le_2^-tag", forgery);

  record("budget_fixtures", budget(256, SecurityLevel::pow2(64)).qkd_budget == 2808 &&
                                budget(128, SecurityLevel::pow2(32)).qkd_budget == 1400);
  emit_report(g, kv);
  return all ? kOk : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlhl: seeded extractors, key combining and handshake simulation"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Globals g;
  app.add_option("--report", g.report, "Write a key-value report here");
  app.add_flag("--verbose", g.verbose, "Print bound terms on stderr");
  app.add_option("--rng-seed", g.rng_seed, "Seed for every random draw");
  std::function<int()> action;

  add_bits(app, g, action);
  add_extract(app, g, action);
  add_bound(app, g, action);
  add_alpha(app, g, action);
  add_bootstrap(app, g, action);
  add_combine(app, g, action);
  add_budget(app, g, action);
  add_handshake(app, g, action);
  add_mac(app, g, action);
  app.add_subcommand("selftest", "Run the small exhaustive checks")->callback([&g, &action] {
    action = [&g] { return selftest(g); };
  });
  // Global flags may follow the subcommand.
  std::function<void(CLI::App*)> fall = [&](CLI::App* a) {
    for (auto* s : a->get_subcommands({})) {
      s->fallthrough();
      fall(s);
    }
  };
  fall(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }
  try {
    return action ? action() : kError;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    if (e.code() == Errc::kInfeasible) {
      std::cerr << "infeasible: " << e.what() << "\n";
      return kInfeasible;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
