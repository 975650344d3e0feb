#include <gtest/gtest.h>

#include "natdens/adversary.hpp"
#include "natdens/natset.hpp"

using namespace natdens;

TEST(NatSet, CountIn) {
  EXPECT_EQ(count_in(*evens(), interval(1, 10)), 5U);
  EXPECT_EQ(count_in(*no_density_example(), interval(1, 7)), 5U);
  EXPECT_EQ(count_in(*multiples_of(3), interval(10, 15)), 2U);
  EXPECT_EQ(count_in(*empty_set(), interval(1, 100)), 0U);
  EXPECT_EQ(count_in(*all_naturals(), interval(5, 100)), 96U);
  EXPECT_THROW(multiples_of(0), error);
}

TEST(NatSet, CountsAgreeWithMembershipScan) {
  for (const auto& S : {evens(), odds(), multiples_of(3), multiples_of(7), no_density_example(),
                        shuffle_inverse_of_evens(), all_naturals(), empty_set()}) {
    std::vector<nat> prefix(4097, 0);
    for (nat n = 1; n <= 4096; ++n) prefix[n] = prefix[n - 1] + (S->contains(n) ? 1 : 0);
    for (nat n = 1; n <= 4096; ++n) ASSERT_EQ(S->count_leq(n), prefix[n]) << S->name() << " n=" << n;
    for (nat a = 1; a <= 4096; a += 37) {
      for (nat b = a; b <= 4096; b += 13) {
        ASSERT_EQ(S->count_in(interval(a, b)), prefix[b] - prefix[a - 1]) << S->name();
      }
    }
  }
}

TEST(NatSet, PredicateCacheCrossesBlocks) {
  const auto S = multiples_of(5);
  const nat n = 3 * predicate_set::block_size + 17;
  EXPECT_EQ(S->count_leq(n), n / 5);
  EXPECT_EQ(S->count_leq(10), 2U);
}

TEST(BitWindowSet, CountsAndBounds) {
  bit_window_set s("w", interval(1, 200));
  for (nat n = 3; n <= 200; n += 3) s.insert(n);
  s.seal();
  EXPECT_EQ(s.count_leq(200), 66U);
  EXPECT_EQ(s.count_in(interval(10, 20)), 3U);
  EXPECT_THROW(s.contains(201), error);
  EXPECT_THROW(s.insert(0), error);

  bit_window_set off("off", interval(100, 300));
  off.insert(100);
  off.insert(250);
  off.seal();
  EXPECT_EQ(off.count_in(interval(100, 300)), 2U);
  EXPECT_EQ(off.count_in(interval(101, 300)), 1U);
  EXPECT_THROW(off.count_leq(150), error);
}

TEST(BitWindowSet, UnsealedQueriesThrow) {
  bit_window_set s("w", interval(1, 64));
  s.insert(5);
  EXPECT_THROW(s.count_leq(10), error);
}
