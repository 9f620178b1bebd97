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

#include "qlhl/extractor.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"

namespace qlhl {
namespace {

BitString B(const char* s) { return BitString::from_string(s); }

oracle::Bits to_oracle(const BitString& x) {
  oracle::Bits b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) b[i] = x[i];
  return b;
}

TEST(ExtractorParamsTest, Constraints) {
  EXPECT_EQ(ExtractorParams::modified(10, 4).seed_len, 9u);
  EXPECT_EQ(ExtractorParams::regular(10, 4).seed_len, 13u);
  EXPECT_THROW(ExtractorParams::modified(3, 4), Error);
  EXPECT_THROW(ExtractorParams::modified(3, 0), Error);
  EXPECT_NO_THROW(ExtractorParams::modified(3, 3));
  ExtractorParams bad{10, 4, 10, Family::kModifiedToeplitz};
  EXPECT_THROW(bad.validate(), Error);
}

TEST(ExtractorTest, HandWorkedThreeBitCase) {
  const SeededHash h(ExtractorParams::modified(3, 2), B("10"));
  EXPECT_EQ(h.matrix_dump(), "110\n001\n");
  EXPECT_EQ(extract(h, B("110")), B("00"));
  EXPECT_EQ(extract_fast(h, B("110")), B("00"));
  const auto m = oracle::modified_toeplitz(3, 2, {1, 0});
  EXPECT_EQ(oracle::mul(m, {1, 1, 0}), (oracle::Bits{0, 0}));
}

TEST(ExtractorTest, MatchesOracleMatrixExhaustivelySmall) {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      const auto p = ExtractorParams::modified(n, m);
      for (std::uint64_t s = 0; s < (1u << p.seed_len); ++s) {
        const SeededHash h(p, BitString::from_uint(s, p.seed_len));
        const auto mat = oracle::modified_toeplitz(n, m, oracle::bits_of(s, p.seed_len));
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(h.entry(i, j), mat[i][j] != 0);
        }
        for (std::uint64_t x = 0; x < (1u << n); ++x) {
          const auto xb = BitString::from_uint(x, n);
          const auto want = oracle::value_of(oracle::mul(mat, oracle::bits_of(x, n)));
          ASSERT_EQ(extract(h, xb).to_uint(), want);
          ASSERT_EQ(extract_fast(h, xb).to_uint(), want);
        }
      }
    }
  }
}

TEST(ExtractorTest, RegularFamilyMatchesOracle) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 150, m = 1 + rng() % 150;
    const auto p = ExtractorParams::regular(n, m);
    const SeededHash h(p, BitString::random(p.seed_len, rng));
    const auto x = BitString::random(n, rng);
    const auto mat = oracle::regular_toeplitz(n, m, to_oracle(h.seed()));
    const auto want = oracle::mul(mat, to_oracle(x));
    const auto got = extract(h, x);
    ASSERT_EQ(to_oracle(got), want);
    ASSERT_EQ(extract_fast(h, x), got);
  }
}

TEST(ExtractorTest, ZeroInputGivesZeroOutput) {
  std::mt19937_64 rng(8);
  const auto p = ExtractorParams::modified(300, 120);
  const SeededHash h(p, BitString::random(p.seed_len, rng));
  EXPECT_EQ(extract(h, BitString(300)), BitString(120));
  EXPECT_EQ(extract_fast(h, BitString(300)), BitString(120));
}

TEST(ExtractorTest, Linearity) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t m = 1 + rng() % n;
    const auto p = ExtractorParams::modified(n, m);
    const SeededHash h(p, BitString::random(p.seed_len, rng));
    const auto a = BitString::random(n, rng);
    const auto b = BitString::random(n, rng);
    ASSERT_EQ(extract(h, a ^ b), extract(h, a) ^ extract(h, b));
  }
}

TEST(ExtractorTest, FullOutputIsIdentity) {
  std::mt19937_64 rng(13);
  const auto p = ExtractorParams::modified(70, 70);
  const SeededHash h(p, BitString::random(69, rng));
  const auto x = BitString::random(70, rng);
  EXPECT_EQ(extract(h, x), x);
  EXPECT_EQ(extract_fast(h, x), x);
}

TEST(ExtractorTest, LengthMismatchIsRejected) {
  EXPECT_THROW(SeededHash(ExtractorParams::modified(5, 2), B("101")), Error);
  const SeededHash h(ExtractorParams::modified(3, 2), B("10"));
  EXPECT_THROW(extract(h, B("11")), Error);
  EXPECT_THROW(extract_fast(h, B("1100")), Error);
}

TEST(ExtractorTest, FastPathAgreesOnLargeInputs) {
  std::mt19937_64 rng(21);
  for (std::size_t n : {63u, 64u, 65u, 127u, 128u, 129u, 1000u, 4096u}) {
    for (std::size_t m : {std::size_t{1}, n / 3 + 1, n / 2, n - 1, n}) {
      if (m < 1 || m > n) continue;
      const auto p = ExtractorParams::modified(n, m);
      const SeededHash h(p, BitString::random(p.seed_len, rng));
      const auto x = BitString::random(n, rng);
      ASSERT_EQ(extract_fast(h, x), extract(h, x)) << n << " " << m;
    }
  }
}

TEST(CollisionTest, HandWorkedCases) {
  EXPECT_EQ(collision_probability(ExtractorParams::modified(2, 1), B("10"), B("00")), Fraction(1, 2));
  EXPECT_EQ(collision_probability(ExtractorParams::modified(3, 2), B("001"), B("000")), Fraction(0));
  EXPECT_THROW(collision_probability(ExtractorParams::modified(3, 2), B("001"), B("001")), Error);
  EXPECT_THROW(collision_probability(ExtractorParams::modified(21, 2), BitString(21),
                                     BitString::from_uint(1, 21)),
               Error);
}

TEST(CollisionTest, UniversalUpToEightBits) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      const auto p = ExtractorParams::modified(n, m);
      const Fraction limit(1, std::uint64_t{1} << m);
      for (std::uint64_t d = 1; d < (1u << n); ++d) {
        // Collision depends only on the difference, so x2 = 0 covers all pairs.
        const auto c = collision_probability(p, BitString::from_uint(d, n), BitString(n));
        ASSERT_LE(c, limit) << n << " " << m << " " << d;
      }
    }
  }
}

TEST(CollisionTest, EveryMatrixHasFullRowRank) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      for (std::uint64_t s = 0; s < (1u << (n - 1)); ++s) {
        ASSERT_EQ(oracle::rank(oracle::modified_toeplitz(n, m, oracle::bits_of(s, n - 1))),
                  static_cast<int>(m));
      }
    }
  }
}

TEST(DistanceTest, UniformInputIsPerfect) {
  const auto p = ExtractorParams::modified(6, 3);
  const std::vector<double> uniform(64, 1.0 / 64);
  EXPECT_NEAR(exact_extraction_distance(p, uniform), 0.0, 1e-15);
}

TEST(DistanceTest, PointMass) {
  const auto p = ExtractorParams::modified(2, 2);
  const std::vector<double> point = {0, 0, 1, 0};
  EXPECT_NEAR(exact_extraction_distance(p, point), 0.75, 1e-15);
  const std::vector<std::uint32_t> support = {2};
  EXPECT_EQ(flat_extraction_distance(p, support), Fraction(3, 4));
}

TEST(DistanceTest, Guards) {
  const std::vector<double> bad(16, 0.1);
  EXPECT_THROW(exact_extraction_distance(ExtractorParams::modified(4, 2), bad), Error);
  const std::vector<double> big(1u << 13, 1.0 / (1u << 13));
  EXPECT_THROW(exact_extraction_distance(ExtractorParams::modified(13, 2), big), Error);
}

TEST(DistanceTest, FlatMatchesOracleAndFloatPath) {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t m = 1 + rng() % n;
    const std::size_t k = rng() % (n + 1);
    std::vector<std::uint32_t> all(1u << n);
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    const std::vector<std::uint32_t> support(all.begin(), all.begin() + (1u << k));
    const auto p = ExtractorParams::modified(n, m);
    const auto exact = flat_extraction_distance(p, support);

    std::vector<std::uint64_t> sup64(support.begin(), support.end());
    std::vector<std::uint64_t> seeds(1u << (n - 1));
    for (std::uint64_t s = 0; s < seeds.size(); ++s) seeds[s] = s;
    const auto ref = oracle::flat_distance(n, m, sup64, seeds);
    // Cross-multiplied equality of the two rationals.
    ASSERT_EQ(static_cast<unsigned __int128>(exact.num()) * ref.den,
              ref.num * static_cast<unsigned __int128>(exact.den()));

    std::vector<double> dist(1u << n, 0.0);
    for (auto x : support) dist[x] = 1.0 / static_cast<double>(support.size());
    ASSERT_NEAR(exact_extraction_distance(p, dist), exact.to_double(), 1e-12);
  }
}

}  // namespace
}  // namespace qlhl
