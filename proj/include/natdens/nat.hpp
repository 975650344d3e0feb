#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace natdens {

// Elements of N are 1, 2, 3, ...; 0 only shows up as a count or an empty prefix.
using nat = std::uint64_t;

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class overflow_error : public error {
 public:
  explicit overflow_error(const std::string& what) : error("overflow: " + what) {}
};

inline nat checked_add(nat x, nat y) {
  nat out;
  if (__builtin_add_overflow(x, y, &out)) throw overflow_error(std::to_string(x) + " + " + std::to_string(y));
  return out;
}

inline nat checked_sub(nat x, nat y) {
  if (y > x) throw error("natural subtraction underflow: " + std::to_string(x) + " - " + std::to_string(y));
  return x - y;
}

inline nat checked_mul(nat x, nat y) {
  nat out;
  if (__builtin_mul_overflow(x, y, &out)) throw overflow_error(std::to_string(x) + " * " + std::to_string(y));
  return out;
}

inline nat pow2(unsigned e) {
  if (e >= 64) throw overflow_error("2^" + std::to_string(e));
  return nat{1} << e;
}

/// floor(log2 n); n must be nonzero.
inline unsigned floor_log2(nat n) {
  if (n == 0) throw error("floor_log2(0) is undefined");
  return static_cast<unsigned>(std::bit_width(n)) - 1;
}

inline nat require_positive(nat n, const char* what) {
  if (n == 0) throw error(std::string(what) + " must be a natural number >= 1");
  return n;
}

}  // namespace natdens
