#pragma once

// Exhaustive ground truth: representations of n as a sum of m squares, the
// sums reachable from them by sign choices, partition counts P_m(n), and
// Lehmer's closed-form classification of P_m(n) = 1.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sumsq/arith.hpp"

namespace sumsq {

/// Limits shared by every exhaustive search. Exceeding either is a
/// BudgetExceeded error.
struct Budget {
  /// Recursion nodes visited while enumerating representations.
  std::uint64_t max_nodes = 100'000'000;
  /// Width of the sign-DP bitset, i.e. the largest possible sum of parts.
  std::int64_t max_dp_width = 1'000'000;
};

/// Nonincreasing nonnegative parts whose squares sum to the represented n.
struct Representation {
  std::vector<std::int64_t> parts;

  friend bool operator==(const Representation&, const Representation&) = default;
};

namespace detail {

inline void check_oracle_args(int m, std::int64_t n) {
  if (m < 1) throw DomainError("m must be positive");
  if (n < 0) throw DomainError("n must be nonnegative");
  check_width(n, "n");
}

class RepWalker {
 public:
  using Visitor = std::function<bool(const std::vector<std::int64_t>&)>;

  RepWalker(int m, const Budget& budget, const Visitor& visit) : m_(m), budget_(budget), visit_(visit) {
    parts_.reserve(static_cast<std::size_t>(m));
  }

  void run(std::int64_t n) { step(m_, n, isqrt(n)); }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool step(int slots, std::int64_t rem, std::int64_t max_part) {
    if (++nodes_ > budget_.max_nodes) {
      throw BudgetExceeded("representation enumeration exceeded " + std::to_string(budget_.max_nodes) +
                           " nodes");
    }
    if (rem == 0) {
      parts_.resize(static_cast<std::size_t>(m_), 0);
      bool more = visit_(parts_);
      parts_.resize(static_cast<std::size_t>(m_ - slots));
      return more;
    }
    if (slots == 0) return true;
    const std::int64_t hi = std::min(max_part, isqrt(rem));
    for (std::int64_t p = hi; p >= 1; --p) {
      // The remaining slots can hold at most slots * p^2.
      if (static_cast<__int128>(rem) > static_cast<__int128>(slots) * p * p) break;
      parts_.push_back(p);
      bool more = step(slots - 1, rem - p * p, p);
      parts_.pop_back();
      if (!more) return false;
    }
    return true;
  }

  int m_;
  const Budget& budget_;
  const Visitor& visit_;
  std::vector<std::int64_t> parts_;
  std::uint64_t nodes_ = 0;
};

/// Growable bitset with the shift-or needed by subset-sum DPs.
class SumBits {
 public:
  explicit SumBits(std::int64_t max_value)
      : size_(max_value + 1), words_(static_cast<std::size_t>(max_value / 64 + 1), 0) {}

  void set(std::int64_t i) { words_[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63); }
  bool test(std::int64_t i) const {
    return i >= 0 && i < size_ && ((words_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1);
  }
  std::int64_t size() const { return size_; }

  /// this |= this << shift
  void or_shifted(std::int64_t shift) {
    if (shift <= 0) return;
    const auto n = static_cast<std::int64_t>(words_.size());
    const std::int64_t ws = shift >> 6;
    const int bs = static_cast<int>(shift & 63);
    for (std::int64_t i = n - 1; i >= ws; --i) {
      std::uint64_t v = words_[static_cast<std::size_t>(i - ws)] << bs;
      if (bs != 0 && i - ws - 1 >= 0) v |= words_[static_cast<std::size_t>(i - ws - 1)] >> (64 - bs);
      words_[static_cast<std::size_t>(i)] |= v;
    }
    trim();
  }

  void or_with(const SumBits& other) {
    for (std::size_t i = 0; i < std::min(words_.size(), other.words_.size()); ++i) words_[i] |= other.words_[i];
    trim();
  }

 private:
  void trim() {
    if (const int extra = static_cast<int>(words_.size() * 64 - static_cast<std::size_t>(size_)); extra > 0) {
      words_.back() &= ~std::uint64_t{0} >> extra;
    }
  }

  std::int64_t size_;
  std::vector<std::uint64_t> words_;
};

inline std::int64_t sum_of(const std::vector<std::int64_t>& parts) {
  std::int64_t s = 0;
  for (auto p : parts) s += p;
  return s;
}

/// Subset sums of the parts; a signed sum is total - 2 * (negated subset).
inline SumBits subset_sums(const std::vector<std::int64_t>& parts) {
  SumBits bits(sum_of(parts));
  bits.set(0);
  for (auto p : parts) bits.or_shifted(p);
  return bits;
}

}  // namespace detail

/// Visit every representation of n as a sum of m squares, as nonincreasing
/// nonnegative parts, in lexicographically decreasing order. The visitor
/// returns false to stop early.
inline void for_each_representation(int m, std::int64_t n,
                                    const std::function<bool(const std::vector<std::int64_t>&)>& visit,
                                    const Budget& budget = {}) {
  detail::check_oracle_args(m, n);
  detail::RepWalker walker(m, budget, visit);
  walker.run(n);
}

inline std::vector<Representation> enumerate_reps(int m, std::int64_t n, const Budget& budget = {}) {
  std::vector<Representation> out;
  for_each_representation(
      m, n,
      [&](const std::vector<std::int64_t>& parts) {
        out.push_back({parts});
        return true;
      },
      budget);
  return out;
}

/// P_m(n): number of essentially different representations.
inline std::int64_t partition_count(int m, std::int64_t n, const Budget& budget = {}) {
  std::int64_t count = 0;
  for_each_representation(
      m, n,
      [&](const std::vector<std::int64_t>&) {
        ++count;
        return true;
      },
      budget);
  return count;
}

/// All |e_1 a_1 + ... + e_m a_m| over sign vectors e, as nonnegative values
/// in increasing order.
inline std::vector<std::int64_t> signed_sums(const std::vector<std::int64_t>& parts) {
  const std::int64_t total = detail::sum_of(parts);
  const detail::SumBits sub = detail::subset_sums(parts);
  std::vector<std::int64_t> out;
  for (std::int64_t s = total / 2; s >= 0; --s) {
    if (sub.test(s)) out.push_back(total - 2 * s);
  }
  return out;
}

/// A sign vector e in {+1,-1}^m with sum e_i parts_i == target, if one exists.
inline std::optional<std::vector<int>> sign_witness(const std::vector<std::int64_t>& parts, std::int64_t target) {
  const std::int64_t total = detail::sum_of(parts);
  // Need a negated subset summing to (total - target) / 2.
  if ((total - target) % 2 != 0) return std::nullopt;
  const std::int64_t want = (total - target) / 2;
  if (want < 0 || want > total) return std::nullopt;

  // reach[i] = subset sums of parts[0..i)
  std::vector<detail::SumBits> reach;
  reach.reserve(parts.size() + 1);
  reach.emplace_back(total);
  reach.back().set(0);
  for (auto p : parts) {
    detail::SumBits next = reach.back();
    next.or_shifted(p);
    reach.push_back(std::move(next));
  }
  if (!reach.back().test(want)) return std::nullopt;

  std::vector<int> signs(parts.size(), 1);
  std::int64_t s = want;
  for (std::size_t i = parts.size(); i-- > 0;) {
    if (reach[i].test(s)) continue;  // part i stays positive
    signs[i] = -1;
    s -= parts[i];
  }
  return signs;
}

/// Every T >= 0 such that +-T = x_1 + ... + x_m for some integer solution of
/// x_1^2 + ... + x_m^2 = n.
inline std::vector<std::int64_t> attainable_sums(int m, std::int64_t n, const Budget& budget = {}) {
  detail::check_oracle_args(m, n);
  // Cauchy-Schwarz: the sum of the parts is at most sqrt(mn).
  const std::int64_t width = isqrt(checked_mul(m, n));
  if (width > budget.max_dp_width) {
    throw BudgetExceeded("sign-DP width " + std::to_string(width) + " exceeds " +
                         std::to_string(budget.max_dp_width));
  }
  detail::SumBits seen(width);
  for_each_representation(
      m, n,
      [&](const std::vector<std::int64_t>& parts) {
        const std::int64_t total = detail::sum_of(parts);
        const detail::SumBits sub = detail::subset_sums(parts);
        for (std::int64_t s = 0; 2 * s <= total; ++s) {
          if (sub.test(s)) seen.set(total - 2 * s);
        }
        return true;
      },
      budget);
  std::vector<std::int64_t> out;
  for (std::int64_t t = 0; t <= width; ++t) {
    if (seen.test(t)) out.push_back(t);
  }
  return out;
}

/// Whether T is a signed sum of some representation of n as m squares,
/// by enumeration; stops at the first witness.
inline bool oracle_contains(int m, std::int64_t n, std::int64_t t, const Budget& budget = {}) {
  detail::check_oracle_args(m, n);
  if (t < 0) t = -t;
  bool found = false;
  for_each_representation(
      m, n,
      [&](const std::vector<std::int64_t>& parts) {
        const std::int64_t total = detail::sum_of(parts);
        if (total < t || ((total - t) & 1)) return true;
        found = detail::subset_sums(parts).test((total - t) / 2);
        return !found;
      },
      budget);
  return found;
}

namespace detail {

inline constexpr std::array<std::int64_t, 33> kUniqueThreeSquareCores = {
    1,  2,  3,  5,  6,  10, 11, 13,  14,  19,  21,  22,  30,  35,  37,  42,
    43, 46, 58, 67, 70, 78, 91, 93, 115, 133, 142, 163, 190, 235, 253, 403, 427};

inline std::int64_t strip_powers_of_four(std::int64_t n) {
  while (n % 4 == 0) n /= 4;
  return n;
}

}  // namespace detail

/// Closed-form test for P_m(n) == 1 (Lehmer; Bateman-Grosswald for m = 3).
inline bool lehmer_unique(int m, std::int64_t n) {
  if (m < 1) throw DomainError("m must be positive");
  if (n < 1) throw DomainError("n must be positive");
  check_width(n, "n");
  switch (m) {
    case 1:
      return is_square(n);
    case 2: {
      // n = 2^k q^2 or 2^k q^2 p: q odd with only prime factors 3 mod 4
      // (q = 1 allowed), p a prime 1 mod 4.
      const Factorization f = factorize(n);
      int ones = 0;
      for (const auto& [p, e] : f.factors) {
        if (p == 2) continue;
        if (p % 4 == 3) {
          if (e % 2 != 0) return false;
        } else {
          if (e != 1) return false;
          ++ones;
        }
      }
      return ones <= 1;
    }
    case 3: {
      const std::int64_t c = detail::strip_powers_of_four(n);
      return std::binary_search(detail::kUniqueThreeSquareCores.begin(), detail::kUniqueThreeSquareCores.end(), c);
    }
    case 4: {
      if (n == 1 || n == 3 || n == 5 || n == 7 || n == 11 || n == 15 || n == 23) return true;
      const std::int64_t c = detail::strip_powers_of_four(n);
      return c == 2 || c == 6 || c == 14;
    }
    case 5:
      return n == 1 || n == 2 || n == 3 || n == 6 || n == 7 || n == 15;
    default:
      return n == 1 || n == 2 || n == 3 || n == 7;
  }
}

}  // namespace sumsq
