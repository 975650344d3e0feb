#include <gtest/gtest.h>

#include <random>

#include "natdens/rational.hpp"

using natdens::rational;

TEST(Rational, LowestTermsAndSign) {
  const rational x = rational::of(6, -8);
  EXPECT_EQ(x.num(), -3);
  EXPECT_EQ(x.den(), 4);
  EXPECT_EQ(x.str(), "-3/4");
  EXPECT_EQ(rational(2).str(), "2");
}

TEST(Rational, Parse) {
  EXPECT_EQ(rational::parse("3/4"), rational::of(3, 4));
  EXPECT_EQ(rational::parse("0.75"), rational::of(3, 4));
  EXPECT_EQ(rational::parse("-1.5"), rational::of(-3, 2));
  EXPECT_EQ(rational::parse("49/100"), rational::of(49, 100));
  EXPECT_EQ(rational::parse("7"), rational(7));
  for (const char* bad : {"", "x", "1/0", "1/", "/2", "1.2.3", "3/4x", "--1"}) {
    EXPECT_THROW(rational::parse(bad), natdens::error) << bad;
  }
}

TEST(Rational, FloorCeil) {
  EXPECT_EQ(rational::of(3, 2).floor_times(10), 15);
  EXPECT_EQ(rational::of(3, 2).floor_times(1), 1);
  EXPECT_EQ(rational::of(3, 2).ceil_times(3), 5);
  EXPECT_EQ(rational::of(-3, 2).floor(), -2);
  EXPECT_EQ(rational::of(-3, 2).ceil(), -1);
}

TEST(Rational, OverflowIsAnError) {
  const rational big = rational::of(INT64_MAX, 3);
  EXPECT_THROW(big * big, natdens::overflow_error);
  EXPECT_THROW(rational(1) / rational(0), natdens::error);
}

TEST(Rational, OrderingAgreesWithCrossMultiplication) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-1000, 1000), den(1, 1000);
  for (int t = 0; t < 5000; ++t) {
    const std::int64_t a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    const rational x = rational::of(a, b), y = rational::of(c, d);
    EXPECT_EQ(x < y, a * d < c * b);
    EXPECT_EQ(x == y, a * d == c * b);
    EXPECT_EQ((x + y) - y, x);
    if (c != 0) {
      EXPECT_EQ((x / y) * y, x);
    }
  }
}

TEST(Rational, Decimal12) {
  EXPECT_DOUBLE_EQ(rational::of(2, 3).decimal12(), 0.666666666667);
  EXPECT_DOUBLE_EQ(rational::of(1, 8).decimal12(), 0.125);
}
