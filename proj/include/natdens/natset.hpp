#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natdens/interval.hpp"
#include "natdens/nat.hpp"

namespace natdens {

/// A subset S of N seen through membership and prefix counts ||S_n||.
///
/// Realizations must satisfy count_leq(n) - count_leq(n-1) == contains(n) and
/// be safe to query from several threads at once.
class nat_set {
 public:
  virtual ~nat_set() = default;

  virtual bool contains(nat n) const = 0;

  /// ||S_n||: members in [1, n]. count_leq(0) == 0.
  virtual nat count_leq(nat n) const = 0;

  /// ||S intersect I||.
  virtual nat count_in(const interval& I) const { return count_leq(I.b()) - count_leq(I.a() - 1); }

  /// Largest n for which queries are answered; unbounded sets return nullopt.
  virtual std::optional<nat> horizon() const { return std::nullopt; }

  virtual std::string name() const = 0;
};

using set_ptr = std::shared_ptr<const nat_set>;

inline nat count_in(const nat_set& S, const interval& I) { return S.count_in(I); }

/// Membership rule plus a prefix-count cache filled in blocks of 2^16.
class predicate_set final : public nat_set {
 public:
  static constexpr nat block_size = nat{1} << 16;

  predicate_set(std::string name, std::function<bool(nat)> rule) : name_(std::move(name)), rule_(std::move(rule)) {}

  bool contains(nat n) const override { return n != 0 && rule_(n); }

  nat count_leq(nat n) const override {
    const nat block = n / block_size;
    nat base;
    {
      std::lock_guard lock(mutex_);
      while (block_prefix_.size() <= block) {
        const nat start = (block_prefix_.size() - 1) * block_size;
        nat c = block_prefix_.back();
        for (nat x = start + 1; x <= start + block_size; ++x) c += contains(x);
        block_prefix_.push_back(c);
      }
      base = block_prefix_[block];
    }
    for (nat x = block * block_size + 1; x <= n; ++x) base += contains(x);
    return base;
  }

  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::function<bool(nat)> rule_;
  mutable std::mutex mutex_;
  // block_prefix_[i] = ||S_{i * block_size}||
  mutable std::vector<nat> block_prefix_{0};
};

class interval_union_set final : public nat_set {
 public:
  interval_union_set(std::string name, interval_union parts) : name_(std::move(name)), parts_(std::move(parts)) {
    nat running = 0;
    for (const auto& p : parts_.parts()) {
      before_.push_back(running);
      running += p.size();
    }
  }

  bool contains(nat n) const override { return parts_.contains(n); }

  nat count_leq(nat n) const override {
    const auto& ps = parts_.parts();
    auto it = std::upper_bound(ps.begin(), ps.end(), n, [](nat x, const interval& p) { return x < p.a(); });
    if (it == ps.begin()) return 0;
    const auto idx = static_cast<std::size_t>(std::prev(it) - ps.begin());
    return before_[idx] + std::min(ps[idx].b(), n) - ps[idx].a() + 1;
  }

  const interval_union& parts() const { return parts_; }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  interval_union parts_;
  std::vector<nat> before_;
};

/// Explicit members of a finite window [lo, hi]. Prefix counts need lo == 1;
/// count_in works for any interval inside the window.
class bit_window_set final : public nat_set {
 public:
  bit_window_set(std::string name, interval window)
      : name_(std::move(name)), window_(window), words_((window.size() + 63) / 64, 0) {}

  void insert(nat n) {
    check(n);
    const nat off = n - window_.a();
    words_[off / 64] |= std::uint64_t{1} << (off % 64);
    dirty_ = true;
  }

  /// Rebuilds the per-word prefix table; call after the last insert.
  void seal() {
    word_prefix_.assign(words_.size() + 1, 0);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      word_prefix_[i + 1] = word_prefix_[i] + static_cast<nat>(std::popcount(words_[i]));
    }
    dirty_ = false;
  }

  bool contains(nat n) const override {
    check(n);
    const nat off = n - window_.a();
    return (words_[off / 64] >> (off % 64)) & 1U;
  }

  nat count_leq(nat n) const override {
    if (window_.a() != 1) throw error("prefix counts unavailable: window " + window_.str() + " does not start at 1");
    if (n == 0) return 0;
    return count_from_lo(n);
  }

  nat count_in(const interval& I) const override {
    if (!window_.contains(I)) throw error(I.str() + " lies outside the materialized window " + window_.str());
    const nat upto_b = count_from_lo(I.b());
    return I.a() == window_.a() ? upto_b : upto_b - count_from_lo(I.a() - 1);
  }

  std::optional<nat> horizon() const override { return window_.b(); }
  const interval& window() const { return window_; }
  std::string name() const override { return name_; }

  /// Members in ascending order.
  std::vector<nat> members() const {
    std::vector<nat> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        out.push_back(window_.a() + w * 64 + static_cast<nat>(bit));
        bits &= bits - 1;
      }
    }
    return out;
  }

 private:
  void check(nat n) const {
    if (!window_.contains(n)) throw error(std::to_string(n) + " lies outside the materialized window " + window_.str());
  }

  // members in [lo, n], n inside the window
  nat count_from_lo(nat n) const {
    check(n);
    if (dirty_) throw error("bit_window_set queried before seal()");
    const nat off = n - window_.a();
    const std::size_t w = off / 64;
    const unsigned bit = off % 64;
    const std::uint64_t mask = bit == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (bit + 1)) - 1);
    return word_prefix_[w] + static_cast<nat>(std::popcount(words_[w] & mask));
  }

  std::string name_;
  interval window_;
  std::vector<std::uint64_t> words_;
  std::vector<nat> word_prefix_;
  bool dirty_ = true;
};

inline set_ptr evens() {
  return std::make_shared<predicate_set>("evens", [](nat n) { return n % 2 == 0; });
}

inline set_ptr odds() {
  return std::make_shared<predicate_set>("odds", [](nat n) { return n % 2 == 1; });
}

inline set_ptr multiples_of(nat k) {
  require_positive(k, "multiples:k");
  return std::make_shared<predicate_set>("multiples:" + std::to_string(k), [k](nat n) { return n % k == 0; });
}

inline set_ptr all_naturals() {
  return std::make_shared<predicate_set>("all", [](nat) { return true; });
}

inline set_ptr empty_set() {
  return std::make_shared<predicate_set>("empty", [](nat) { return false; });
}

}  // namespace natdens
