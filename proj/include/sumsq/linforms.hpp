#pragma once

// S_{m,A}(n): the values a_1 x_1 + ... + a_m x_m over integer solutions of
// x_1^2 + ... + x_m^2 = n.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumsq/arith.hpp"
#include "sumsq/mordell.hpp"
#include "sumsq/oracle.hpp"

namespace sumsq {

/// Coefficients a_1 >= ... >= a_m >= 0 with a_1 >= 1, a = sum a_i^2,
/// d = gcd(a_i), a' = a / d^2.
struct LinearForm {
  std::vector<std::int64_t> coeffs;
  std::int64_t a = 0;
  std::int64_t d = 0;
  std::int64_t a_prime = 0;

  int m() const { return static_cast<int>(coeffs.size()); }

  friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

/// Signs and order of the coefficients do not change S_{m,A}(n); take
/// absolute values and sort them nonincreasing.
inline LinearForm normalize(std::span<const std::int64_t> raw) {
  if (raw.empty()) throw DomainError("linear form needs at least one coefficient");
  LinearForm f;
  f.coeffs.reserve(raw.size());
  for (std::int64_t c : raw) {
    check_width(c, "coefficient");
    f.coeffs.push_back(c < 0 ? -c : c);
  }
  std::sort(f.coeffs.begin(), f.coeffs.end(), std::greater<>());
  if (f.coeffs.front() == 0) throw DomainError("linear form coefficients are all zero");
  for (std::int64_t c : f.coeffs) {
    f.a = checked_add(f.a, checked_mul(c, c));
    f.d = std::gcd(f.d, c);
  }
  check_width(f.a, "sum of squared coefficients");
  f.a_prime = f.a / (f.d * f.d);
  return f;
}

inline LinearForm normalize(std::initializer_list<std::int64_t> raw) {
  return normalize(std::span<const std::int64_t>(raw.begin(), raw.size()));
}

namespace detail {

inline std::int64_t checked_an(const LinearForm& f, std::int64_t n) {
  if (n < 1) throw DomainError("n must be positive");
  check_width(n, "n");
  const std::int64_t an = checked_mul(f.a, n);
  check_width(an, "a*n");
  return an;
}

inline __int128 square128(std::int64_t t) { return static_cast<__int128>(t) * t; }

}  // namespace detail

/// Cauchy-Schwarz: members satisfy T^2 <= a n.
inline bool cs_bound_holds(const LinearForm& f, std::int64_t n, std::int64_t t) {
  return detail::square128(t) <= static_cast<__int128>(detail::checked_an(f, n));
}

/// a' b d when n = a' b^2; then +-a'bd are exactly the members with T^2 = an.
inline std::optional<std::int64_t> extremal_members(const LinearForm& f, std::int64_t n) {
  detail::checked_an(f, n);
  if (n % f.a_prime != 0 || !is_square(n / f.a_prime)) return std::nullopt;
  return checked_mul(checked_mul(f.a_prime, isqrt(n / f.a_prime)), f.d);
}

namespace detail {

// Exhaustive search: for each representation of n as m squares, try every
// way of dealing its parts onto the coefficient classes (slots sharing a
// coefficient value are interchangeable), then every sign pattern by a
// subset-sum DP over the weighted parts.
class LinearSearch {
 public:
  LinearSearch(const LinearForm& f, std::int64_t n, const Budget& budget)
      : form_(f), n_(n), budget_(budget), width_(isqrt(checked_an(f, n))), seen_(width_) {
    if (width_ > budget.max_dp_width) {
      throw BudgetExceeded("linear-form DP width " + std::to_string(width_) + " exceeds " +
                           std::to_string(budget.max_dp_width));
    }
    for (std::size_t i = 0; i < f.coeffs.size();) {
      std::size_t j = i;
      while (j < f.coeffs.size() && f.coeffs[j] == f.coeffs[i]) ++j;
      class_coeff_.push_back(f.coeffs[i]);
      class_room_.push_back(static_cast<int>(j - i));
      i = j;
    }
  }

  /// Runs to completion, or until `target` is found when given.
  void run(std::optional<std::int64_t> target = std::nullopt) {
    target_ = target;
    for_each_representation(
        form_.m(), n_,
        [&](const std::vector<std::int64_t>& parts) {
          group_parts(parts);
          deal(0, 0);
          return !found_;
        },
        budget_);
  }

  bool found() const { return found_; }

  std::vector<std::int64_t> values() const {
    std::vector<std::int64_t> out;
    for (std::int64_t t = 0; t <= width_; ++t) {
      if (seen_.test(t)) out.push_back(t);
    }
    return out;
  }

 private:
  void group_parts(const std::vector<std::int64_t>& parts) {
    part_value_.clear();
    part_count_.clear();
    for (std::int64_t p : parts) {
      if (!part_value_.empty() && part_value_.back() == p) {
        ++part_count_.back();
      } else {
        part_value_.push_back(p);
        part_count_.push_back(1);
      }
    }
  }

  // Assign the copies of distinct part `vi` to coefficient classes, starting
  // at class `ci`; `left` copies of part vi still need a class.
  void deal(std::size_t vi, std::size_t ci, int left = -1) {
    if (found_) return;
    if (vi == part_value_.size()) {
      evaluate();
      return;
    }
    if (left < 0) left = part_count_[vi];
    if (left == 0) {
      deal(vi + 1, 0);
      return;
    }
    if (ci == class_coeff_.size()) return;
    const int take_max = std::min(left, class_room_[ci]);
    for (int take = take_max; take >= 0; --take) {
      if (++nodes_ > budget_.max_nodes) {
        throw BudgetExceeded("linear-form search exceeded " + std::to_string(budget_.max_nodes) + " nodes");
      }
      class_room_[ci] -= take;
      for (int i = 0; i < take; ++i) weights_.push_back(part_value_[vi] * class_coeff_[ci]);
      deal(vi, ci + 1, left - take);
      weights_.resize(weights_.size() - static_cast<std::size_t>(take));
      class_room_[ci] += take;
      if (found_) return;
    }
  }

  void evaluate() {
    std::vector<std::int64_t> w;
    for (std::int64_t x : weights_) {
      if (x != 0) w.push_back(x);
    }
    const std::int64_t total = sum_of(w);
    const SumBits sub = subset_sums(w);
    if (target_) {
      const std::int64_t t = *target_;
      if (t <= total && ((total - t) & 1) == 0 && sub.test((total - t) / 2)) {
        found_ = true;
        seen_.set(t);
      }
      return;
    }
    for (std::int64_t s = 0; 2 * s <= total; ++s) {
      if (sub.test(s)) seen_.set(total - 2 * s);
    }
  }

  const LinearForm& form_;
  std::int64_t n_;
  Budget budget_;
  std::int64_t width_;
  SumBits seen_;
  std::vector<std::int64_t> class_coeff_;
  std::vector<int> class_room_;
  std::vector<std::int64_t> part_value_;
  std::vector<int> part_count_;
  std::vector<std::int64_t> weights_;
  std::optional<std::int64_t> target_;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
};

inline bool uses_fast_arm(const LinearForm& f) { return f.m() == 4 && lehmer_unique(4, f.a); }

}  // namespace detail

/// Whether a_1 x_1 + ... + a_m x_m = T, x_1^2 + ... + x_m^2 = n is solvable.
inline bool contains(const LinearForm& f, std::int64_t n, std::int64_t t, const Budget& budget = {}) {
  const std::int64_t an = detail::checked_an(f, n);
  check_width(t, "T");
  if (t < 0) t = -t;
  const __int128 t2 = detail::square128(t);
  if (t2 > an) return false;
  if (t2 == an) return extremal_members(f, n) == t;
  const auto rest = static_cast<std::int64_t>(an - t2);
  if (detail::uses_fast_arm(f)) return is_sum_of_three_squares(rest);
  // Representability of [a, T, n] is necessary but not sufficient here.
  if (!representable(BinaryForm(f.a, t, n), f.m()).representable) return false;
  detail::LinearSearch search(f, n, budget);
  search.run(t);
  return search.found();
}

enum class LinearMethod { unique_norm, search };

constexpr std::string_view to_string(LinearMethod m) { return m == LinearMethod::unique_norm ? "unique_norm" : "search"; }

/// S_{m,A}(n) as its nonnegative half; symmetric under negation but not in
/// general a parity interval.
struct LinearSumSet {
  LinearForm form;
  std::int64_t n = 1;
  std::vector<std::int64_t> values;
  std::optional<std::int64_t> t_max;
  std::optional<std::int64_t> extremal;
  LinearMethod method = LinearMethod::search;

  bool contains(std::int64_t t) const {
    if (t < 0) t = -t;
    return std::binary_search(values.begin(), values.end(), t);
  }
};

inline LinearSumSet full_set(const LinearForm& f, std::int64_t n, const Budget& budget = {}) {
  const std::int64_t an = detail::checked_an(f, n);
  LinearSumSet s;
  s.form = f;
  s.n = n;
  s.extremal = extremal_members(f, n);
  if (detail::uses_fast_arm(f)) {
    s.method = LinearMethod::unique_norm;
    const std::int64_t top = isqrt(an);
    for (std::int64_t t = 0; t <= top; ++t) {
      const std::int64_t rest = an - t * t;
      if (rest == 0 ? s.extremal == t : is_sum_of_three_squares(rest)) s.values.push_back(t);
    }
  } else {
    s.method = LinearMethod::search;
    detail::LinearSearch search(f, n, budget);
    search.run();
    s.values = search.values();
  }
  if (!s.values.empty()) s.t_max = s.values.back();
  return s;
}

/// Smallest t <= max_t with 4^t in S_{m,A}(n).
inline std::optional<int> min_power_of_four(const LinearForm& f, std::int64_t n, int max_t = 20,
                                            const Budget& budget = {}) {
  std::int64_t power = 1;
  for (int t = 0; t <= max_t; ++t) {
    if (!cs_bound_holds(f, n, power)) break;
    if (contains(f, n, power, budget)) return t;
    if (power > kWidthBound / 4) break;
    power *= 4;
  }
  return std::nullopt;
}

}  // namespace sumsq
