#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "iqplab/hashing.hpp"

using namespace iqplab;

namespace {

// Bit loop over the explicit Toeplitz entries.
BitVector naive_hash(const ToeplitzHasher& h, const BitVector& x) {
  BitVector y(static_cast<std::size_t>(h.m()));
  for (int i = 0; i < h.m(); ++i) {
    bool acc = h.offset().get(static_cast<std::size_t>(i));
    for (int j = 0; j < h.n(); ++j) acc ^= h.diag().get(static_cast<std::size_t>(i - j + h.n() - 1)) && x.get(static_cast<std::size_t>(j));
    y.set(static_cast<std::size_t>(i), acc);
  }
  return y;
}

}  // namespace

TEST(Toeplitz, HandWorkedProduct) {
  // diag = d0..d3 = 1,0,1,1  ->  A = [[1,0,1],[1,1,0]], b = (0,1)
  const ToeplitzHasher h(3, 2, BitVector::from_string("1011"), BitVector::from_string("01"));
  EXPECT_TRUE(h.entry(0, 0));
  EXPECT_FALSE(h.entry(0, 1));
  EXPECT_TRUE(h.entry(0, 2));
  EXPECT_TRUE(h.entry(1, 0));
  EXPECT_TRUE(h.entry(1, 1));
  EXPECT_FALSE(h.entry(1, 2));
  EXPECT_EQ(hash(h, BitVector::from_string("110")).to_string(), "11");
  EXPECT_EQ(hash(h, BitVector::from_string("011")).to_string(), "10");
  EXPECT_EQ(hash(h, BitVector::from_string("000")), h.offset());
}

TEST(Toeplitz, ConstantDiagonalsAndColumns) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + static_cast<int>(rng.below(70));
    const int m = 1 + static_cast<int>(rng.below(70));
    const auto h = sample_hasher(n, m, rng);
    for (int i = 0; i + 1 < m; ++i) {
      for (int j = 0; j + 1 < n; ++j) ASSERT_EQ(h.entry(i, j), h.entry(i + 1, j + 1));
    }
    for (int c = 0; c < n; ++c) {
      const auto col = h.column(c);
      for (int i = 0; i < m; ++i) ASSERT_EQ(col.get(static_cast<std::size_t>(i)), h.entry(i, c));
    }
  }
}

TEST(Toeplitz, PackedMatchesNaiveAndIsAffine) {
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + static_cast<int>(rng.below(130));
    const int m = 1 + static_cast<int>(rng.below(40));
    const auto h = sample_hasher(n, m, rng);
    for (int k = 0; k < 10; ++k) {
      BitVector x1(static_cast<std::size_t>(n)), x2(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        x1.set(static_cast<std::size_t>(i), rng.bit());
        x2.set(static_cast<std::size_t>(i), rng.bit());
      }
      ASSERT_EQ(h(x1), naive_hash(h, x1));
      ASSERT_EQ(h(x1 ^ x2), h(x1) ^ h(x2) ^ h.offset());
      ASSERT_EQ(h(x1) ^ h(x2), h.linear(x1 ^ x2));
    }
  }
  EXPECT_THROW(hash(sample_hasher(3, 2, rng), BitVector(4)), ArgumentError);
}

TEST(Toeplitz, SyndromeTableMatchesHasher) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + static_cast<int>(rng.below(64));
    const int m = 1 + static_cast<int>(rng.below(64));
    const auto h = sample_hasher(n, m, rng);
    const SyndromeTable tab(h);
    for (int k = 0; k < 20; ++k) {
      const std::uint64_t x = n == 64 ? rng.next_u64() : rng.next_u64() & ((std::uint64_t{1} << n) - 1);
      ASSERT_EQ(tab(x), h(BitVector::from_uint(x, static_cast<std::size_t>(n))).to_uint());
    }
  }
}

TEST(Toeplitz, RejectsBadFieldLengths) {
  EXPECT_THROW(ToeplitzHasher(3, 2, BitVector(3), BitVector(2)), ArgumentError);
  EXPECT_THROW(ToeplitzHasher(3, 2, BitVector(4), BitVector(1)), ArgumentError);
  EXPECT_THROW(ToeplitzHasher(3, 0, BitVector(2), BitVector(0)), ArgumentError);
}

TEST(SampleHasher, FamilyOfFourAtN1M1) {
  Rng rng(4);
  std::map<std::pair<std::string, std::string>, int> seen;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    const auto h = sample_hasher(1, 1, rng);
    seen[{h.diag().to_string(), h.offset().to_string()}]++;
  }
  ASSERT_EQ(seen.size(), 4u);
  const double se = std::sqrt(0.25 * 0.75 / draws);
  for (const auto& [k, c] : seen) EXPECT_NEAR(c / double(draws), 0.25, 4 * se);
}

TEST(SampleHasher, FamilySizeAndDeterminism) {
  std::set<std::pair<std::string, std::string>> members;
  for (std::uint64_t i = 0; i < (1u << 6); ++i) {
    const auto h = hasher_from_index(3, 2, i);
    members.insert({h.diag().to_string(), h.offset().to_string()});
  }
  EXPECT_EQ(members.size(), 64u);  // 2^{n+2m-1}
  Rng a(99), b(99);
  const auto ha = sample_hasher(17, 5, a), hb = sample_hasher(17, 5, b);
  EXPECT_EQ(ha.diag(), hb.diag());
  EXPECT_EQ(ha.offset(), hb.offset());
}

TEST(Pairwise, ExhaustiveSmallFamilies) {
  const std::pair<int, int> cases[] = {{1, 1}, {2, 1}, {3, 1}, {3, 2}, {4, 2}, {2, 3}, {5, 1}};
  for (auto [n, m] : cases) {
    const auto rep = pairwise_independence_exhaustive(n, m);
    EXPECT_TRUE(rep.ok()) << n << "," << m;
    EXPECT_EQ(rep.family_size, std::uint64_t{1} << (n + 2 * m - 1));
    const std::uint64_t xs = std::uint64_t{1} << n, ys = std::uint64_t{1} << m;
    EXPECT_EQ(rep.tuples_checked, xs * (xs - 1) * ys * ys);
  }
  EXPECT_EQ(pairwise_independence_exhaustive(1, 1).expected_count, 1u);
  EXPECT_EQ(pairwise_independence_exhaustive(2, 1).expected_count, 2u);
  EXPECT_EQ(pairwise_independence_exhaustive(3, 2).expected_count, 4u);
}

TEST(Pairwise, IndependentEnumerationOracle) {
  // Count with the naive bit loop instead of the packed tables.
  const int n = 2, m = 2;
  std::map<std::tuple<std::uint64_t, std::uint64_t, std::string, std::string>, int> counts;
  for (std::uint64_t i = 0; i < (1u << (n + 2 * m - 1)); ++i) {
    const auto h = hasher_from_index(n, m, i);
    for (std::uint64_t x1 = 0; x1 < 4; ++x1) {
      for (std::uint64_t x2 = 0; x2 < 4; ++x2) {
        if (x1 == x2) continue;
        counts[{x1, x2, naive_hash(h, BitVector::from_uint(x1, n)).to_string(),
                naive_hash(h, BitVector::from_uint(x2, n)).to_string()}]++;
      }
    }
  }
  EXPECT_EQ(counts.size(), 12u * 16u);
  for (const auto& [k, c] : counts) EXPECT_EQ(c, 2);
}

TEST(Pairwise, BudgetEnforced) {
  EXPECT_THROW(pairwise_independence_exhaustive(10, 7), ResourceError);
  EXPECT_THROW(pairwise_independence_exhaustive(12, 2), ResourceError);
}

TEST(Leftover, FullCubeDeviatesOnlyForRankDeficientMatrices) {
  // Preimages of an affine map on the full cube all have size 2^{n-m} iff A has rank m.
  std::vector<BitVector> cube;
  for (std::uint64_t x = 0; x < 256; ++x) cube.push_back(BitVector::from_uint(x, 8));
  Rng rng(5), replay(5);
  const std::uint64_t trials = 2000;
  const auto rep = leftover_deviation_probability(cube, 3, 0.01, trials, rng);
  std::uint64_t deficient = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto h = sample_hasher(8, 3, replay);
    std::vector<std::uint64_t> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(h.row(i).to_uint());
    int rank = 0;
    for (int bit = 0; bit < 8; ++bit) {
      auto it = std::find_if(rows.begin() + rank, rows.end(), [&](auto r) { return (r >> bit) & 1u; });
      if (it == rows.end()) continue;
      std::swap(*it, rows[static_cast<std::size_t>(rank)]);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k != static_cast<std::size_t>(rank) && ((rows[k] >> bit) & 1u)) rows[k] ^= rows[static_cast<std::size_t>(rank)];
      }
      ++rank;
    }
    deficient += rank < 3;
  }
  EXPECT_GT(deficient, 0u);
  EXPECT_EQ(rep.deviations, deficient);

  // A full-rank hasher never deviates.
  const ToeplitzHasher id(8, 3, BitVector::from_string("0000000100"), BitVector::from_string("101"));
  std::size_t hits = 0;
  for (const auto& x : cube) hits += id(x).none();
  EXPECT_EQ(hits, 32u);
}

TEST(Leftover, BoundValues) {
  const int m = 4;
  std::vector<BitVector> s;
  for (std::uint64_t x = 0; x < (1u << (m + 6)); ++x) s.push_back(BitVector::from_uint(x * 7 + 3, 16));
  Rng rng(6);
  const auto rep = leftover_deviation_probability(s, m, 0.25, 10, rng);
  EXPECT_DOUBLE_EQ(rep.bound, 0.25);
}

TEST(Leftover, RandomSetBelowBound) {
  Rng rng(7);
  std::set<std::uint64_t> picked;
  while (picked.size() < 1024) picked.insert(rng.below(1u << 20));
  std::vector<BitVector> s;
  for (auto x : picked) s.push_back(BitVector::from_uint(x, 20));
  const auto rep = leftover_deviation_probability(s, 4, 0.5, 4000, rng);
  EXPECT_DOUBLE_EQ(rep.bound, 1.0 / 16);
  EXPECT_LT(rep.empirical, rep.bound);
  EXPECT_TRUE(rep.pass());
}

TEST(Leftover, WideInputsUseGenericPath) {
  Rng rng(8);
  std::vector<BitVector> s;
  for (int i = 0; i < 512; ++i) {
    BitVector x(80);
    for (std::size_t b = 0; b < 80; ++b) x.set(b, rng.bit());
    s.push_back(x);
  }
  const auto rep = leftover_deviation_probability(s, 2, 0.5, 300, rng);
  EXPECT_TRUE(rep.pass());
}

TEST(Leftover, Preconditions) {
  Rng rng(9);
  std::vector<BitVector> empty;
  EXPECT_THROW(leftover_deviation_probability(empty, 2, 0.5, 10, rng), ArgumentError);
  std::vector<BitVector> one{BitVector(4)};
  EXPECT_THROW(leftover_deviation_probability(one, 2, 0.0, 10, rng), ArgumentError);
}
