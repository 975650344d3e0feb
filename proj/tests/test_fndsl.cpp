#include <gtest/gtest.h>

#include "natdens/fndsl.hpp"
#include "natdens/maps.hpp"
#include "natdens/registry.hpp"

using namespace natdens;

namespace {

const char* kShuffle =
    "when k < 4 -> k; when k - pow2(i) < pow2(i - 1) -> pow2(i) + 2*(k - pow2(i)); "
    "when k >= 1 -> pow2(i) + 2*(k - pow2(i) - pow2(i-1)) + 1;";

}  // namespace

TEST(Dsl, ShuffleSpec) {
  const auto spec = dsl::parse(kShuffle);
  EXPECT_EQ(spec.cases.size(), 3U);
  EXPECT_EQ(dsl::eval(spec, 12), 9U);
  for (nat k = 1; k <= pow2(16); ++k) ASSERT_EQ(dsl::eval(spec, k), sh(k)) << k;
}

TEST(Dsl, BundledFileMatchesBuiltin) {
  const auto spec = dsl::parse(read_text_file(NATDENS_DATA_DIR "/sh.dsl"));
  for (nat k = 1; k <= pow2(16); ++k) ASSERT_EQ(dsl::eval(spec, k), sh(k)) << k;
}

TEST(Dsl, Identity) {
  const auto spec = dsl::parse("when k >= 1 -> k;");
  EXPECT_EQ(spec.cases.size(), 1U);
  EXPECT_EQ(dsl::eval(spec, 7), 7U);
}

TEST(Dsl, ParseErrorPosition) {
  try {
    dsl::parse("when k < -> 3;");
    FAIL() << "expected a parse error";
  } catch (const dsl::parse_error& e) {
    EXPECT_EQ(e.line(), 1U);
    EXPECT_EQ(e.column(), 10U);
    EXPECT_NE(e.message().find("expected an expression"), std::string::npos);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Dsl, ParseErrors) {
  for (const char* bad : {"", "# only a comment\n", "when k -> k;", "when k > 1 -> k", "when k > 1 -> when;",
                          "when k > 1 -> j;", "when k > 1 -> pow2 k;", "when (k > 1) -> k;", "when k > 1 -> 3 $ 4;",
                          "when k > 1 -> 99999999999999999999999;"}) {
    EXPECT_THROW(dsl::parse(bad), dsl::parse_error) << bad;
  }
  try {
    dsl::parse("when k > 1 ->\n  mod 3;");
    FAIL();
  } catch (const dsl::parse_error& e) {
    EXPECT_EQ(e.line(), 2U);
    EXPECT_EQ(e.column(), 3U);
    EXPECT_NE(std::string(e.what()).find("reserved word 'mod'"), std::string::npos);
  }
}

TEST(Dsl, EvalErrors) {
  EXPECT_THROW(dsl::eval(dsl::parse("when k > 5 -> k;"), 3), dsl::eval_error);
  EXPECT_THROW(dsl::eval(dsl::parse("when k >= 1 -> k - 2;"), 1), dsl::eval_error);
  EXPECT_THROW(dsl::eval(dsl::parse("when k >= 1 -> k div (k - 1);"), 1), dsl::eval_error);
  EXPECT_THROW(dsl::eval(dsl::parse("when k >= 1 -> k mod 0;"), 4), dsl::eval_error);
  EXPECT_THROW(dsl::eval(dsl::parse("when k >= 1 -> blog(k - 1);"), 1), dsl::eval_error);
  EXPECT_THROW(dsl::eval(dsl::parse("when k >= 1 -> pow2(64);"), 1), dsl::eval_error);
  EXPECT_THROW(dsl::eval(dsl::parse("when k >= 1 -> k * 9223372036854775807 * 4;"), 3), dsl::eval_error);
  EXPECT_THROW(dsl::eval(dsl::parse("when k >= 1 -> k;"), 0), error);
}

TEST(Dsl, Semantics) {
  EXPECT_EQ(dsl::eval(dsl::parse("when k >= 1 -> i;"), 1), 0U);
  EXPECT_EQ(dsl::eval(dsl::parse("when k >= 1 -> blog(k) + 1;"), 1024), 11U);
  EXPECT_EQ(dsl::eval(dsl::parse("when k >= 1 -> 2 + 3 * k - 1;"), 4), 13U);
  EXPECT_EQ(dsl::eval(dsl::parse("when k >= 1 -> 17 div 5 * 2 + 17 mod 5;"), 4), 8U);
  const auto first = dsl::parse("when k > 2 -> 1; when k > 3 -> 2; when k >= 1 -> 3;");
  EXPECT_EQ(dsl::eval(first, 10), 1U);
  EXPECT_EQ(dsl::eval(first, 1), 3U);
  const auto logic = dsl::parse("when k < 3 or k > 5 and k < 8 -> 1; when k >= 1 -> 2;");
  // left fold: ((k < 3) or (k > 5)) and (k < 8)
  EXPECT_EQ(dsl::eval(logic, 1), 1U);
  EXPECT_EQ(dsl::eval(logic, 4), 2U);
  EXPECT_EQ(dsl::eval(logic, 6), 1U);
  EXPECT_EQ(dsl::eval(logic, 10), 2U);
  EXPECT_EQ(dsl::eval(dsl::parse("# comment\nwhen k == 4 -> 40; # tail\nwhen k >= 1 -> k;"), 4), 40U);
}

TEST(Dsl, PrettyPrintRoundTrip) {
  const std::vector<std::string> corpus{
      kShuffle,
      "when k >= 1 -> k;",
      "when k < 10 -> k - (3 - 1);",
      "when k >= 1 -> (k + 1) * (k + 2) div (2 mod 3);",
      "when k > 1 and k < 100 or k == 7 -> pow2(blog(k)) + k mod 2;",
      "when k >= 1 -> k - (k - 1) - 0;",
      "when k >= 1 -> 2 * (3 * k) div 4;",
      "when i <= 5 -> pow2(i + 1) - k; when k >= 1 -> ((k));",
  };
  for (const auto& src : corpus) {
    const auto a = dsl::parse(src);
    const auto b = dsl::parse(dsl::pretty(a));
    EXPECT_TRUE(dsl::same_structure(a, b)) << src << "\n" << dsl::pretty(a);
    for (nat k = 1; k <= 200; ++k) {
      std::optional<nat> va, vb;
      try { va = dsl::eval(a, k); } catch (const error&) {}
      try { vb = dsl::eval(b, k); } catch (const error&) {}
      ASSERT_EQ(va, vb) << src << " k=" << k;
    }
  }
}

TEST(Dsl, Check) {
  auto rep = dsl::check(dsl::parse(kShuffle), interval(1, pow2(16)));
  EXPECT_TRUE(rep.total);
  EXPECT_TRUE(rep.injective);
  EXPECT_FALSE(rep.first_failure);

  rep = dsl::check(dsl::parse("when k >= 1 -> k div 2;"), interval(1, 100));
  EXPECT_FALSE(rep.injective);
  ASSERT_TRUE(rep.found);
  EXPECT_EQ(*rep.found, (collision{2, 3, 1}));

  rep = dsl::check(dsl::parse("when k < 10 -> k;"), interval(1, 20));
  EXPECT_FALSE(rep.total);
  EXPECT_EQ(rep.first_uncovered, 10U);

  EXPECT_THROW(dsl::check(dsl::parse("when k >= 1 -> k;"), interval(1, pow2(22) + 1)), error);
}

TEST(Dsl, MapAdapter) {
  const dsl::dsl_map f(dsl::parse("when k >= 1 -> k - 1;"), "pred");
  EXPECT_EQ(f.apply(5), 4U);
  EXPECT_THROW(f.apply(1), error);
  EXPECT_FALSE(f.reach_bound(10));
}
