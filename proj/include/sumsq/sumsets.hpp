#pragma once

// The achievable-sum sets S_m(n) = { x_1 + ... + x_m : x_1^2 + ... + x_m^2 = n }
// together with T*_m(n), fullness, and the m = 3 diagnostic table.
//
// Every query is routed to a closed criterion when one applies:
//   m = 1                  n must be a square
//   n <= m                 all T with |T| <= n and T = n mod 2
//   m = 2                  2n - T^2 is a square
//   m = 3                  squarefree-part conditions on 3n - T^2
//   m = 4                  4n - T^2 is a sum of three squares
//   5 <= m <= 8            every parity-correct T with T^2 < mn
//   9 <= m <= 11, n > m    every parity-correct T with T^2 <= m(n-1)+1
// plus the extremal values +-ma when n = m a^2. For m >= 12 and n > m no
// criterion is known and the exhaustive oracle decides.

#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumsq/arith.hpp"
#include "sumsq/errors.hpp"
#include "sumsq/oracle.hpp"

namespace sumsq {

enum class Method {
  trivial_m1,
  small_n,
  mordell_m2,
  mordell_m3,
  gp_m4,
  full_m5_7,
  full_m8,
  interval_m9_11,
  oracle,
};

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::trivial_m1: return "trivial_m1";
    case Method::small_n: return "small_n";
    case Method::mordell_m2: return "mordell_m2";
    case Method::mordell_m3: return "mordell_m3";
    case Method::gp_m4: return "gp_m4";
    case Method::full_m5_7: return "full_m5_7";
    case Method::full_m8: return "full_m8";
    case Method::interval_m9_11: return "interval_m9_11";
    case Method::oracle: return "oracle";
  }
  return "?";
}

/// Largest set that full_set() will materialize.
inline constexpr std::size_t kMaxMaterializedValues = std::size_t{1} << 24;

/// S_m(n) as its nonnegative half; the set itself is the closure under negation.
struct SumSet {
  int m = 1;
  std::int64_t n = 1;
  /// Nonnegative members in increasing order.
  std::vector<std::int64_t> values;
  int parity = 1;
  std::optional<std::int64_t> t_star;
  bool full = false;
  /// m*a when n = m*a^2.
  std::optional<std::int64_t> extremal;
  Method method = Method::oracle;

  bool empty() const { return values.empty(); }

  bool contains(std::int64_t t) const {
    if (t < 0) t = -t;
    return std::binary_search(values.begin(), values.end(), t);
  }

  /// All members, negatives included, increasing.
  std::vector<std::int64_t> symmetric_values() const {
    std::vector<std::int64_t> out;
    out.reserve(values.size() * 2);
    for (auto it = values.rbegin(); it != values.rend(); ++it) {
      if (*it != 0) out.push_back(-*it);
    }
    out.insert(out.end(), values.begin(), values.end());
    return out;
  }
};

/// One row of the m = 3 table: 3n - T^2 = D0 * D1^2 with D0 = 2^k 3^l q_1...q_r.
struct Diagnostic3 {
  std::int64_t T = 0;
  std::int64_t delta = 0;
  std::int64_t d0 = 0;
  int k = 0;
  int ell = 0;
  std::int64_t d = 1;
  bool member = false;
  std::string reason;
  /// Prime factors of D0 other than 2 and 3.
  std::vector<std::int64_t> q;
};

namespace detail {

inline std::int64_t checked_mn(int m, std::int64_t n) {
  if (m < 1) throw DomainError("m must be positive");
  if (n < 1) throw DomainError("n must be positive");
  check_width(n, "n");
  const std::int64_t mn = checked_mul(m, n);
  check_width(mn, "m*n");
  return mn;
}

/// Largest t >= 0 with t <= bound and t = parity mod 2, or -1.
constexpr std::int64_t top_with_parity(std::int64_t bound, int parity) {
  if (bound < 0) return -1;
  return ((bound & 1) == parity) ? bound : bound - 1;
}

inline std::optional<std::int64_t> extremal_value(int m, std::int64_t n) {
  if (n % m != 0 || !is_square(n / m)) return std::nullopt;
  return static_cast<std::int64_t>(m) * isqrt(n / m);
}

/// Largest T = n mod 2 with T^2 < mn, or -1.
inline std::int64_t top_candidate(int m, std::int64_t n) {
  return top_with_parity(isqrt(checked_mn(m, n) - 1), static_cast<int>(n & 1));
}

/// Largest T = n mod 2 with T^2 <= m(n-1)+1.
inline std::int64_t top_within_bound(int m, std::int64_t n) {
  const std::int64_t bound = checked_add(checked_mul(m, n - 1), 1);
  return top_with_parity(isqrt(bound), static_cast<int>(n & 1));
}

inline std::int64_t candidate_count(int m, std::int64_t n) {
  const std::int64_t top = top_candidate(m, n);
  return top < 0 ? 0 : (top - (n & 1)) / 2 + 1;
}

inline std::string join_q(const std::vector<std::int64_t>& qs) {
  std::string s;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(qs[i]);
  }
  return s;
}

/// Row for 0 <= T with T^2 < 3n.
inline Diagnostic3 three_square_row(std::int64_t n, std::int64_t t) {
  Diagnostic3 row;
  row.T = t;
  row.delta = checked_sub(checked_mul(3, n), checked_mul(t, t));
  const Factorization f = factorize(row.delta);
  row.d0 = squarefree_split(f).d0;
  row.k = (row.d0 % 2 == 0) ? 1 : 0;
  row.ell = (row.d0 % 3 == 0) ? 1 : 0;
  row.d = std::gcd(std::gcd(std::int64_t{3}, t), n);

  std::vector<std::int64_t> bad;
  for (const auto& [p, e] : f.factors) {
    if (p == 2 || p == 3 || !(e & 1)) continue;
    row.q.push_back(p);
    if (p % 6 != 1) bad.push_back(p);
  }
  if (!bad.empty()) {
    row.reason = join_q(bad) + " ≢ 1 mod 6";
  } else if (row.k == 0 && row.ell == 1) {
    row.reason = "(k,ℓ)=(0,1)";
  } else if (row.k == 0 && row.d == 3) {
    row.reason = "(k,d)=(0,3)";
  } else {
    row.member = true;
  }
  return row;
}

// Same verdict as three_square_row(n, t).member without building the row.
inline bool three_square_member(std::int64_t n, std::int64_t t) {
  const std::int64_t delta = checked_sub(checked_mul(3, n), checked_mul(t, t));
  // Past 2 and 3, an odd number of odd-exponent primes = 5 mod 6 leaves a residue 2 mod 3.
  std::int64_t rest = delta >> std::countr_zero(static_cast<std::uint64_t>(delta));
  while (rest % 3 == 0) rest /= 3;
  if (rest % 3 == 2) return false;
  bool two = false, three = false, ok = true;
  visit_prime_factors(delta, [&](std::int64_t p, int e) {
    if (!(e & 1)) return true;
    if (p == 2) {
      two = true;
    } else if (p == 3) {
      three = true;
    } else if (p % 6 != 1) {
      ok = false;
    }
    return ok;
  });
  if (!ok) return false;
  return two || (!three && std::gcd(std::gcd(std::int64_t{3}, t), n) != 3);
}

// Membership of T with 0 <= T, T = n mod 2, T^2 < mn, for a criterion arm.
inline bool interior_member(int m, std::int64_t n, std::int64_t t, const Budget& budget);

inline bool oracle_member(int m, std::int64_t n, std::int64_t t, const Budget& budget) {
  // S_11(n) is contained in S_m(n); accept through the criterion first.
  if (m > 11 && t <= top_within_bound(11, n) && interior_member(11, n, t, budget)) return true;
  return oracle_contains(m, n, t, budget);
}

inline bool interior_member(int m, std::int64_t n, std::int64_t t, const Budget& budget) {
  if (m == 1) return false;
  if (n <= m) return t <= n;
  switch (m) {
    case 2: return is_square(2 * n - t * t);
    case 3: return three_square_member(n, t);
    case 4: return is_sum_of_three_squares(4 * n - t * t);
    case 5: case 6: case 7: case 8: return true;
    case 9: case 10: case 11: return t * t <= m * (n - 1) + 1;
    default:
      if (static_cast<__int128>(t) * t > static_cast<__int128>(m) * (n - 1) + 1) return false;
      return oracle_member(m, n, t, budget);
  }
}

}  // namespace detail

/// Nonnegative T with T = n mod 2 and T^2 < mn, increasing.
inline std::vector<std::int64_t> t_candidates(int m, std::int64_t n) {
  const std::int64_t top = detail::top_candidate(m, n);
  std::vector<std::int64_t> out;
  for (std::int64_t t = n & 1; t <= top; t += 2) out.push_back(t);
  return out;
}

/// Whether x_1 + ... + x_m = T, x_1^2 + ... + x_m^2 = n has an integer solution.
inline bool contains(int m, std::int64_t n, std::int64_t t, const Budget& budget = {}) {
  const std::int64_t mn = detail::checked_mn(m, n);
  check_width(t, "T");
  if (t < 0) t = -t;
  if (((t ^ n) & 1) != 0) return false;
  if (t > isqrt(mn)) return false;
  if (t * t == mn) return detail::extremal_value(m, n) == t;
  return detail::interior_member(m, n, t, budget);
}

/// T*_m(n) = max S_m(n); empty only when no representation exists (m <= 3).
inline std::optional<std::int64_t> t_star(int m, std::int64_t n, const Budget& budget = {}) {
  detail::checked_mn(m, n);
  const auto ext = detail::extremal_value(m, n);
  if (m == 1) return ext;
  if (n <= m) return n;
  if (ext) return ext;
  if (m >= 5 && m <= 8) return detail::top_candidate(m, n);
  if (m >= 9 && m <= 11) return detail::top_within_bound(m, n);
  const std::int64_t hi = m >= 12 ? detail::top_within_bound(m, n) : detail::top_candidate(m, n);
  for (std::int64_t t = hi; t >= 0; t -= 2) {
    if (detail::interior_member(m, n, t, budget)) return t;
  }
  return std::nullopt;
}

/// The arm that decides membership in S_m(n).
inline Method method_for(int m, std::int64_t n) {
  detail::checked_mn(m, n);
  if (m == 1) return Method::trivial_m1;
  if (n <= m) return Method::small_n;
  switch (m) {
    case 2: return Method::mordell_m2;
    case 3: return Method::mordell_m3;
    case 4: return Method::gp_m4;
    case 5: case 6: case 7: return Method::full_m5_7;
    case 8: return Method::full_m8;
    case 9: case 10: case 11: return Method::interval_m9_11;
    default: return Method::oracle;
  }
}

/// S_m(n) with its metadata; `method` records the arm that produced it.
inline SumSet full_set(int m, std::int64_t n, const Budget& budget = {}) {
  detail::checked_mn(m, n);
  SumSet s;
  s.m = m;
  s.n = n;
  s.parity = static_cast<int>(n & 1);
  s.extremal = detail::extremal_value(m, n);

  s.method = method_for(m, n);

  if (m >= 5 || n <= m) {
    // Parity interval below T*.
    s.t_star = t_star(m, n, budget);
    const std::int64_t top_interior = s.extremal ? *s.t_star - 2 : *s.t_star;
    if (top_interior >= 0 && static_cast<std::size_t>(top_interior / 2 + 1) > kMaxMaterializedValues) {
      throw BudgetExceeded("S_" + std::to_string(m) + "(" + std::to_string(n) +
                           ") has too many members to list; query t_star instead");
    }
    for (std::int64_t t = s.parity; t <= top_interior; t += 2) s.values.push_back(t);
  } else {
    const std::int64_t top = detail::top_candidate(m, n);
    if (top >= 0 && static_cast<std::size_t>(top / 2 + 1) > kMaxMaterializedValues) {
      throw BudgetExceeded("S_" + std::to_string(m) + "(" + std::to_string(n) + ") has too many candidates");
    }
    for (std::int64_t t = s.parity; t <= top; t += 2) {
      if (detail::interior_member(m, n, t, budget)) s.values.push_back(t);
    }
  }
  if (s.extremal) s.values.push_back(*s.extremal);
  if (!s.values.empty()) s.t_star = s.values.back();

  const auto interior = static_cast<std::int64_t>(s.values.size()) - (s.extremal ? 1 : 0);
  s.full = interior == detail::candidate_count(m, n);
  return s;
}

/// Whether every T = n mod 2 with T^2 < mn lies in S_m(n).
inline bool is_full(int m, std::int64_t n, const Budget& budget = {}) {
  detail::checked_mn(m, n);
  if (n <= m) {
    // (n+2)^2 >= mn, i.e. m <= n + 4 + 4/n
    return static_cast<__int128>(n + 2) * (n + 2) >= static_cast<__int128>(m) * n;
  }
  switch (m) {
    case 1:
      return false;
    case 2: case 3: case 4:
      for (std::int64_t t = detail::top_candidate(m, n); t >= 0; t -= 2) {
        if (!detail::interior_member(m, n, t, budget)) return false;
      }
      return true;
    case 5: case 6: case 7: case 8:
      return true;
    case 9:
      return !is_square(9 * n - 2);
    case 10:
      return (n & 1) ? !is_square(10 * n - 1) && !is_square(10 * n - 5) : !is_square(10 * n - 4);
    case 11:
      return !is_square(11 * n - 2) && !is_square(11 * n - 6) && !is_square(11 * n - 8);
    default:
      if (n <= m + 6) return true;
      if (n == m + 7) return false;
      // By the T-2 structure, full iff the top candidate is attained.
      return detail::interior_member(m, n, detail::top_candidate(m, n), budget);
  }
}

/// The m = 3 diagnostic table: one row per candidate T, plus the extremal
/// row T = 3t when n = 3t^2.
inline std::vector<Diagnostic3> diagnose_m3(std::int64_t n) {
  detail::checked_mn(3, n);
  std::vector<Diagnostic3> rows;
  for (std::int64_t t : t_candidates(3, n)) rows.push_back(detail::three_square_row(n, t));
  if (const auto ext = detail::extremal_value(3, n)) {
    Diagnostic3 row;
    row.T = *ext;
    row.delta = 0;
    row.d0 = 0;
    row.d = std::gcd(std::gcd(std::int64_t{3}, *ext), n);
    row.member = true;
    row.reason = "extremal: n = 3t^2";
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sumsq
