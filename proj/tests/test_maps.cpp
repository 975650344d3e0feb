#include <gtest/gtest.h>

#include <random>

#include "natdens/adversary.hpp"
#include "natdens/fndsl.hpp"
#include "natdens/maps.hpp"
#include "oracles.hpp"

using namespace natdens;

TEST(Shuffle, Examples) {
  EXPECT_EQ(sh(3), 3U);
  EXPECT_EQ(sh(5), 6U);
  EXPECT_EQ(sh(12), 9U);
  EXPECT_EQ(sh_inv(2), 2U);
  EXPECT_EQ(sh_inv(6), 5U);
  EXPECT_EQ(sh_inv(9), 12U);
  EXPECT_THROW(sh(0), error);
  EXPECT_THROW(sh_inv(0), error);
}

TEST(Shuffle, MatchesDealtTable) {
  const auto table = oracle::shuffle_table(18);
  for (nat k = 1; k < table.size(); ++k) {
    ASSERT_EQ(sh(k), table[k]) << k;
    ASSERT_EQ(sh_inv(table[k]), k) << k;
  }
}

TEST(Shuffle, ParityDealing) {
  for (unsigned i = 2; i <= 16; ++i) {
    const nat base = pow2(i);
    for (nat k = base; k < 2 * base; ++k) {
      ASSERT_EQ(sh(k) % 2 == 0, k < base + base / 2) << k;
    }
  }
}

TEST(Shuffle, PreimageExamples) {
  EXPECT_EQ(sh_preimage_interval(interval(8, 15)).parts(), (std::vector<interval>{{8, 15}}));
  EXPECT_EQ(sh_preimage_interval(interval(8, 11)).parts(), (std::vector<interval>{{8, 9}, {12, 13}}));
  EXPECT_EQ(sh_preimage_interval(interval(1, 3)).parts(), (std::vector<interval>{{1, 3}}));
}

TEST(Shuffle, PreimageMatchesBruteForce) {
  std::mt19937_64 rng(2024);
  const auto f = make_sh();
  std::uniform_int_distribution<nat> pick(1, nat{1} << 16);
  for (int t = 0; t < 300; ++t) {
    nat a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    const interval I(a, b);
    const auto fast = sh_preimage_interval(I);
    const auto brute = oracle::preimage_set(*f, I, detail::block_end(b));
    ASSERT_EQ(fast.parts(), oracle::runs(brute)) << I;
  }
}

TEST(Maps, GenericPreimage) {
  const auto g = make_sh_inv();
  const interval I(100, 300);
  EXPECT_EQ(oracle::members(preimage(*g, I)), oracle::preimage_set(*g, I, 511));
  EXPECT_EQ(preimage(*make_identity(), I).parts(), (std::vector<interval>{I}));
}

TEST(Maps, VerifyInjective) {
  EXPECT_TRUE(verify_injective(*make_sh(), interval(1, pow2(20))).ok);
  EXPECT_TRUE(verify_injective(*make_identity(), interval(1, 10)).ok);
  const dsl::dsl_map constant(dsl::parse("when k >= 1 -> 1;"), "const");
  const auto rep = verify_injective(constant, interval(1, 10));
  EXPECT_FALSE(rep.ok);
  ASSERT_TRUE(rep.found);
  EXPECT_EQ(*rep.found, (collision{1, 2, 1}));
}

TEST(Maps, FirstCollisionPaths) {
  // dense values take the bitmap path, sparse ones the sort path
  EXPECT_EQ(first_collision(5, {10, 11, 12, 11, 10}), (collision{6, 8, 11}));
  EXPECT_EQ(first_collision(1, {nat{1} << 40, 3, nat{1} << 40}), (collision{1, 3, nat{1} << 40}));
  EXPECT_FALSE(first_collision(1, {4, 3, 2, 1}));
}

TEST(Maps, BlocksArePermuted) {
  for (unsigned i = 2; i <= 16; ++i) {
    const nat base = pow2(i);
    std::vector<bool> seen(base, false);
    for (nat k = base; k < 2 * base; ++k) {
      const nat v = sh(k);
      ASSERT_TRUE(v >= base && v < 2 * base);
      ASSERT_FALSE(seen[v - base]);
      seen[v - base] = true;
    }
  }
}

TEST(Maps, ImageOnWindow) {
  const interval w(1, pow2(16));
  const auto img = image_on_window(*make_sh_inv(), *evens(), w);
  const auto closed = shuffle_inverse_of_evens();
  for (nat n = 1; n <= w.b(); ++n) ASSERT_EQ(img->contains(n), closed->contains(n)) << n;
  EXPECT_TRUE(img->contains(2));
  EXPECT_TRUE(img->contains(pow2(14) + pow2(13) - 1));
  EXPECT_FALSE(img->contains(pow2(14) + pow2(13)));

  const auto id = image_on_window(*make_identity(), *evens(), interval(1, 100));
  EXPECT_EQ(id->count_leq(100), 50U);

  const auto m4 = image_on_window(*make_sh(), *multiples_of(4), interval(1, pow2(12)));
  std::set<nat> brute;
  for (nat k = 4; k <= pow2(13); k += 4) {
    if (sh(k) <= pow2(12)) brute.insert(sh(k));
  }
  const auto got = m4->members();
  EXPECT_EQ(std::set<nat>(got.begin(), got.end()), brute);
}

TEST(Maps, ImageNeedsABound) {
  const dsl::dsl_map twice(dsl::parse("when k >= 1 -> 2*k;"), "twice");
  EXPECT_THROW(image_on_window(twice, *evens(), interval(1, 100)), error);
  const auto img = image_on_window(twice, *all_naturals(), interval(1, 100), 50);
  EXPECT_EQ(img->count_leq(100), 50U);
}
