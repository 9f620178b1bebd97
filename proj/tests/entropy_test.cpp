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

#include "qlhl/entropy.hpp"

#include <gtest/gtest.h>

#include <random>

namespace qlhl {
namespace {

SecurityLevel P(double bits) { return SecurityLevel::pow2(bits); }

// Reference values below were produced with mpmath at 40 digits:
//   -log2(2^-a + 2^-b + ...).
TEST(SecurityLevelTest, AddMatchesHighPrecisionReference) {
  EXPECT_NEAR(eps_add(P(10), P(12)).neg_log2(), 9.678071905112637652, 1e-9);
  EXPECT_NEAR(eps_add(P(10), P(10)).neg_log2(), 9.0, 1e-12);
  EXPECT_NEAR((P(10) + P(10) + P(12)).neg_log2(), 8.830074998557687637, 1e-9);
  EXPECT_NEAR((P(40) + P(50) + P(60) + P(32)).neg_log2(), 31.99436996343236672, 1e-9);
  EXPECT_NEAR((eps_times(P(40), 2) + eps_times(P(50), 2) + P(32)).neg_log2(),
              31.98876182305315596, 1e-9);
}

TEST(SecurityLevelTest, PerfectIsIdentity) {
  EXPECT_EQ(eps_add(P(17), SecurityLevel::perfect()), P(17));
  EXPECT_EQ(eps_add(SecurityLevel::perfect(), P(17)), P(17));
  EXPECT_TRUE(eps_add(SecurityLevel::perfect(), SecurityLevel::perfect()).is_perfect());
}

TEST(SecurityLevelTest, AddIsCommutativeAssociativeMonotone) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  for (int t = 0; t < 1000; ++t) {
    const auto a = P(u(rng)), b = P(u(rng)), c = P(u(rng));
    EXPECT_EQ(eps_add(a, b).neg_log2(), eps_add(b, a).neg_log2());
    EXPECT_NEAR(((a + b) + c).neg_log2(), (a + (b + c)).neg_log2(), 1e-12);
    EXPECT_LE((a + b).neg_log2(), std::min(a.neg_log2(), b.neg_log2()));
  }
}

TEST(SecurityLevelTest, SumIsCappedAtOne) {
  EXPECT_EQ((P(0) + P(0)).neg_log2(), 0.0);
  EXPECT_EQ(P(0.5).scaled_pow2(3).neg_log2(), 0.0);
}

TEST(SecurityLevelTest, Parse) {
  EXPECT_EQ(SecurityLevel::parse("2^-64").neg_log2(), 64.0);
  EXPECT_TRUE(SecurityLevel::parse("0").is_perfect());
  EXPECT_TRUE(SecurityLevel::parse("inf").is_perfect());
  EXPECT_NEAR(SecurityLevel::parse("0.25").neg_log2(), 2.0, 1e-15);
  EXPECT_THROW(SecurityLevel::parse("2"), Error);
  EXPECT_THROW(SecurityLevel::parse("abc"), Error);
  EXPECT_EQ(P(64).to_string(), "2^-64");
}

TEST(EntropyKindTest, HillAbsorbs) {
  for (auto k : {EntropyKind::kMinEntropy, EntropyKind::kSmoothMinEntropy, EntropyKind::kHill}) {
    EXPECT_EQ(join(EntropyKind::kHill, k), EntropyKind::kHill);
    EXPECT_EQ(join(k, EntropyKind::kHill), EntropyKind::kHill);
    EXPECT_EQ(join(k, k), k);
  }
}

TEST(SourceSpecTest, RejectsEntropyAboveLength) {
  EXPECT_THROW(SourceSpec("x", 8, 9), Error);
  EXPECT_THROW(SourceSpec("x", 8, -1), Error);
  EXPECT_NO_THROW(SourceSpec("x", 0, 0));
}

TEST(SourceSpecTest, ConcatAddsLengthsEntropiesAndEps) {
  const SourceSpec a("a", 8, 8, P(10));
  const SourceSpec b("b", 8, 8, P(12));
  const auto ind = Independence::assert_mutual({"a", "b"});
  const auto c = concat_sources(a, b, ind);
  EXPECT_EQ(c.length(), 16u);
  EXPECT_EQ(c.hmin(), 16.0);
  EXPECT_NEAR(c.eps().neg_log2(), 9.678071905112637652, 1e-9);
  EXPECT_EQ(c.kind(), EntropyKind::kMinEntropy);

  const auto perfect = concat_sources(SourceSpec::secure("a", 4), SourceSpec::secure("b", 4), ind);
  EXPECT_TRUE(perfect.eps().is_perfect());
}

TEST(SourceSpecTest, ConcatNeedsIndependenceClaim) {
  const SourceSpec a("a", 8, 8);
  const SourceSpec b("b", 8, 8);
  try {
    concat_sources(a, b, Independence::assert_mutual({"a"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIndependenceNotAsserted);
  }
  EXPECT_THROW(concat_sources(a, a, Independence::assert_mutual({"a"})), Error);
}

TEST(SourceSpecTest, ConcatPropagatesHill) {
  const SourceSpec a("a", 8, 8, P(10), EntropyKind::kHill);
  const SourceSpec b("b", 8, 8, P(12));
  const auto c = concat_sources(a, b, Independence::assert_mutual({"a", "b"}));
  EXPECT_EQ(c.kind(), EntropyKind::kHill);
}

TEST(SourceSpecTest, ConcatEntropyAdditivityRandom) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n1 = 1 + rng() % 500, n2 = 1 + rng() % 500;
    const double k1 = static_cast<double>(rng() % (n1 + 1));
    const double k2 = static_cast<double>(rng() % (n2 + 1));
    const SourceSpec a("a", n1, k1, P(static_cast<double>(rng() % 100)));
    const SourceSpec b("b", n2, k2, P(static_cast<double>(rng() % 100)));
    const auto c = concat_sources(a, b, Independence::assert_mutual({"a", "b"}));
    ASSERT_EQ(c.length(), n1 + n2);
    ASSERT_EQ(c.hmin(), k1 + k2);
    ASSERT_LE(c.hmin(), static_cast<double>(c.length()));
  }
}

TEST(SourceSpecTest, SplitSecureKeepsEpsOnEachPart) {
  const auto x = SourceSpec::secure("x", 16, P(20));
  const auto parts = split_secure(x, 7);
  EXPECT_EQ(parts.head.length(), 7u);
  EXPECT_EQ(parts.head.hmin(), 7.0);
  EXPECT_EQ(parts.tail.length(), 9u);
  EXPECT_EQ(parts.tail.hmin(), 9.0);
  EXPECT_EQ(parts.head.eps(), x.eps());
  EXPECT_EQ(parts.tail.eps(), x.eps());

  const auto edge = split_secure(x, 0);
  EXPECT_EQ(edge.head.length(), 0u);
  EXPECT_EQ(edge.tail.length(), 16u);

  EXPECT_THROW(split_secure(SourceSpec("w", 16, 15), 3), Error);
}

TEST(SourceSpecTest, SplitThenRecombineDoublesEps) {
  const auto x = SourceSpec::secure("x", 16, P(20));
  const auto parts = split_secure(x, 5);
  const auto back = concat_sources(parts.head, parts.tail, parts.independence);
  EXPECT_EQ(back.length(), 16u);
  EXPECT_EQ(back.hmin(), 16.0);
  EXPECT_NEAR(back.eps().neg_log2(), 19.0, 1e-12);
}

TEST(SourceSpecTest, TruncateIsWorstCase) {
  const SourceSpec x("x", 1023, 500, P(9));
  const auto t = truncate_source(x, 100);
  EXPECT_EQ(t.length(), 923u);
  EXPECT_EQ(t.hmin(), 400.0);
  EXPECT_EQ(t.eps(), x.eps());
  EXPECT_EQ(truncate_source(x, 0), x);
  const auto z = truncate_source(SourceSpec("y", 64, 10), 30);
  EXPECT_EQ(z.length(), 34u);
  EXPECT_EQ(z.hmin(), 0.0);
  EXPECT_THROW(truncate_source(x, 1024), Error);
}

TEST(SourceSpecTest, LeakSubtractsAndClamps) {
  const auto x = SourceSpec::secure("x", 256);
  EXPECT_EQ(leak(x, 100).hmin(), 156.0);
  EXPECT_EQ(leak(x, 100).length(), 256u);
  EXPECT_EQ(leak(x, 0), x);
  EXPECT_EQ(leak(x, 300).hmin(), 0.0);
}

TEST(SourceSpecTest, KvRoundTrip) {
  const SourceSpec x("qkd", 256, 200.5, P(64), EntropyKind::kHill);
  const auto text = x.to_kv().to_string();
  EXPECT_EQ(SourceSpec::from_kv(KvDoc::parse(text)), x);
}

TEST(KvDocTest, ParsesCommentsAndRejectsDuplicates) {
  const auto doc = KvDoc::parse("# header\na = 1\n\nb=two # note\n");
  EXPECT_EQ(doc.get("a"), "1");
  EXPECT_EQ(doc.get("b"), "two");
  EXPECT_THROW(KvDoc::parse("a = 1\na = 2\n"), Error);
  EXPECT_THROW(KvDoc::parse("novalue\n"), Error);
  EXPECT_THROW(doc.get("c"), Error);
}

TEST(KvDocTest, NumbersRoundTrip) {
  KvDoc doc;
  doc.set("x", 0.1).set("y", INFINITY).set("n", 42);
  const auto back = KvDoc::parse(doc.to_string());
  EXPECT_EQ(back.get_double("x"), 0.1);
  EXPECT_TRUE(std::isinf(back.get_double("y")));
  EXPECT_EQ(back.get_uint("n"), 42u);
}

}  // namespace
}  // namespace qlhl
