#include <gtest/gtest.h>

#include "natdens/interval.hpp"

using namespace natdens;

TEST(Interval, RejectsZeroAndReversed) {
  EXPECT_THROW(interval(0, 3), error);
  EXPECT_THROW(interval(5, 4), error);
  EXPECT_EQ(interval(3, 3).size(), 1U);
}

TEST(Interval, Mu) {
  EXPECT_EQ(mu(interval(1, 1)), rational(1));
  EXPECT_EQ(mu(interval(4, 7)), rational::of(7, 4));
  EXPECT_GT(mu(interval(4, 7)), rational::of(3, 2));
  EXPECT_EQ(mu(interval(10, 15)), rational::of(3, 2));
}

TEST(Interval, Classify) {
  const rational m = rational::of(3, 2);
  auto c = classify(interval(10, 15), m);
  EXPECT_TRUE(c.is_m_interval);
  EXPECT_FALSE(c.is_plus_m);
  EXPECT_EQ(c.label, interval_kind::m_interval);

  c = classify(interval(10, 19), m);
  EXPECT_TRUE(c.is_plus_m);
  EXPECT_EQ(c.label, interval_kind::plus_m);

  c = classify(interval(10, 14), m);
  EXPECT_FALSE(c.is_m_interval);
  EXPECT_FALSE(c.is_plus_m);
  EXPECT_EQ(c.label, interval_kind::neither);

  EXPECT_THROW(classify(interval(10, 14), rational(1)), error);
}

TEST(Interval, MIntervalAt) {
  const rational m = rational::of(3, 2);
  EXPECT_EQ(m_interval_at(10, m), interval(10, 15));
  EXPECT_EQ(m_interval_at(1, m), interval(1, 1));
  EXPECT_EQ(m_interval_at(16, m), interval(16, 24));
}

TEST(Interval, Tiling) {
  const rational m = rational::of(3, 2);
  EXPECT_EQ(tile_m_intervals(10, 24, m), (std::vector<interval>{{10, 15}, {16, 24}}));
  EXPECT_EQ(tile_m_intervals(1, 1, m), (std::vector<interval>{{1, 1}}));
  EXPECT_EQ(tile_m_intervals(16, 30, m), (std::vector<interval>{{16, 24}, {25, 37}}));
}

TEST(Interval, TilingIsContiguousAndExact) {
  for (const rational& m : {rational::of(3, 2), rational(2), rational::of(11, 10), rational::of(21, 20)}) {
    for (nat lo : {1, 7, 100, 999}) {
      for (nat hi : {lo, lo + 1, lo + 50, lo + 3000}) {
        const auto tiles = tile_m_intervals(lo, hi, m);
        ASSERT_FALSE(tiles.empty());
        EXPECT_EQ(tiles.front().a(), lo);
        EXPECT_GE(tiles.back().b(), hi);
        for (std::size_t j = 0; j < tiles.size(); ++j) {
          EXPECT_TRUE(classify(tiles[j], m).is_m_interval);
          if (j > 0) {
            EXPECT_EQ(tiles[j].a(), tiles[j - 1].b() + 1);
          }
        }
      }
    }
  }
}

TEST(Interval, MIntervalRoundTrip) {
  for (const rational& m : {rational::of(3, 2), rational(2), rational::of(11, 10)}) {
    for (nat a = 1; a <= 1000000; ++a) {
      if (!is_m_interval(m_interval_at(a, m), m)) FAIL() << "a=" << a << " m=" << m;
    }
  }
}

TEST(IntervalUnion, MergesAdjacentAndOverlapping) {
  interval_union u;
  u.add(interval(4, 7));
  u.add(interval(8, 11));
  ASSERT_EQ(u.parts().size(), 1U);
  EXPECT_EQ(u.parts()[0], interval(4, 11));
  u.add(interval(20, 30));
  u.add(interval(1, 2));
  u.add(interval(10, 21));
  EXPECT_EQ(u.parts(), (std::vector<interval>{{1, 2}, {4, 30}}));
  EXPECT_EQ(u.size(), 29U);
  EXPECT_TRUE(u.contains(4));
  EXPECT_FALSE(u.contains(3));
  EXPECT_EQ(u.count_leq(5), 4U);
  EXPECT_EQ(u.overlap(interval(2, 5)), 3U);
}

TEST(IntervalUnion, HandlesTopOfRange) {
  interval_union u;
  const nat top = ~nat{0};
  u.add(interval(top - 5, top));
  u.add(interval(top - 10, top - 6));
  ASSERT_EQ(u.parts().size(), 1U);
  EXPECT_EQ(u.parts()[0], interval(top - 10, top));
}
