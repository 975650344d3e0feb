#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "natdens/nat.hpp"

namespace natdens {

/// Exact rational with 64-bit numerator and positive 64-bit denominator,
/// always in lowest terms. Intermediate products use 128-bit integers and any
/// result that does not fit is an overflow_error.
class rational {
 public:
  using wide = __int128;

  constexpr rational() = default;
  constexpr rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  rational(wide n, wide d) { assign(n, d); }

  static rational of(std::int64_t n, std::int64_t d) { return rational(wide{n}, wide{d}); }

  /// Accepts "n", "n/d", and plain decimals such as "0.75" or "-1.5".
  static rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }

  /// floor(*this) as a wide integer.
  wide floor() const { return floor_div(num_, den_); }
  wide ceil() const { return -floor_div(-wide{num_}, den_); }

  /// floor(*this * x) computed without rounding.
  wide floor_times(nat x) const { return floor_div(wide{num_} * static_cast<wide>(x), den_); }
  wide ceil_times(nat x) const { return -floor_div(-wide{num_} * static_cast<wide>(x), den_); }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Value rounded to 12 significant digits, for reports.
  double decimal12() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", to_double());
    return std::strtod(buf, nullptr);
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend rational operator+(const rational& x, const rational& y) {
    return rational(wide{x.num_} * y.den_ + wide{y.num_} * x.den_, wide{x.den_} * y.den_);
  }
  friend rational operator-(const rational& x, const rational& y) {
    return rational(wide{x.num_} * y.den_ - wide{y.num_} * x.den_, wide{x.den_} * y.den_);
  }
  friend rational operator*(const rational& x, const rational& y) {
    return rational(wide{x.num_} * y.num_, wide{x.den_} * y.den_);
  }
  friend rational operator/(const rational& x, const rational& y) {
    if (y.num_ == 0) throw error("rational division by zero");
    return rational(wide{x.num_} * y.den_, wide{x.den_} * y.num_);
  }
  rational operator-() const { return rational(-wide{num_}, wide{den_}); }
  rational& operator+=(const rational& y) { return *this = *this + y; }
  rational& operator-=(const rational& y) { return *this = *this - y; }
  rational& operator*=(const rational& y) { return *this = *this * y; }

  friend bool operator==(const rational& x, const rational& y) = default;
  friend std::strong_ordering operator<=>(const rational& x, const rational& y) {
    const wide lhs = wide{x.num_} * y.den_;
    const wide rhs = wide{y.num_} * x.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend rational abs(const rational& x) { return x.num_ < 0 ? -x : x; }

  friend std::ostream& operator<<(std::ostream& os, const rational& x) { return os << x.str(); }

  static wide floor_div(wide n, wide d) {
    wide q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
  }

 private:
  static wide gcd(wide x, wide y) {
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
      wide t = x % y;
      x = y;
      y = t;
    }
    return x;
  }

  void assign(wide n, wide d) {
    if (d == 0) throw error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const wide g = gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr wide lo = std::numeric_limits<std::int64_t>::min() + wide{1};
    constexpr wide hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) throw overflow_error("rational result does not fit in 64 bits");
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline rational rational::parse(std::string_view text) {
  auto fail = [&]() -> rational { throw error("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) return fail();

  auto parse_int = [&](std::string_view s, bool allow_sign) -> wide {
    bool neg = false;
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) fail();
    wide v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') fail();
      v = v * 10 + (c - '0');
      if (v > std::numeric_limits<std::int64_t>::max()) throw overflow_error("rational literal '" + std::string(text) + "'");
    }
    return neg ? -v : v;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return rational(parse_int(text.substr(0, slash), true), parse_int(text.substr(slash + 1), false));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
    if (whole.empty() && frac.empty()) return fail();
    if (frac.size() > 18) throw overflow_error("too many decimal digits in '" + std::string(text) + "'");
    wide scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    wide w = whole.empty() ? 0 : parse_int(whole, false);
    wide f = frac.empty() ? 0 : parse_int(frac, false);
    wide n = w * scale + f;
    return rational(neg ? -n : n, scale);
  }
  return rational(parse_int(text, true), wide{1});
}

}  // namespace natdens
