#pragma once

// Slow, independent reference implementations used only by the tests. None of
// them call into the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace ref {

using i64 = std::int64_t;
using u64 = std::uint64_t;

inline i64 floor_sqrt(i64 n) {
  i64 r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  for (b %= m; e; e >>= 1, b = mulmod(b, b, m)) {
    if (e & 1) r = mulmod(r, b, m);
  }
  return r;
}

/// Miller-Rabin with Sinclair's seven bases, exact for all 64-bit n.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) d /= 2, ++s;
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    a %= n;
    if (a == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

/// Table of which n <= limit are sums of k squares, by direct marking.
inline std::vector<char> sos_table(int k, i64 limit) {
  std::vector<char> reach(static_cast<std::size_t>(limit + 1), 0);
  reach[0] = 1;
  for (int step = 0; step < k; ++step) {
    std::vector<char> next(reach.size(), 0);
    for (i64 v = 0; v <= limit; ++v) {
      if (!reach[static_cast<std::size_t>(v)]) continue;
      for (i64 x = 0; v + x * x <= limit; ++x) next[static_cast<std::size_t>(v + x * x)] = 1;
    }
    reach.swap(next);
  }
  return reach;
}

/// S_m(n) for all m <= m_max, n <= n_max by peeling one coordinate at a time:
/// S_m(n) = union over x of x + S_{m-1}(n - x^2).
class SumSetTable {
 public:
  SumSetTable(int m_max, i64 n_max) : m_max_(m_max), n_max_(n_max), width_(floor_sqrt(m_max * n_max)) {
    span_ = static_cast<std::size_t>(2 * width_ + 1);
    words_ = span_ / 64 + 1;
    bits_.assign(static_cast<std::size_t>(m_max + 1) * static_cast<std::size_t>(n_max + 1) * words_, 0);
    set_bit(row(0, 0), width_);
    for (int m = 1; m <= m_max; ++m) {
      for (i64 n = 0; n <= n_max; ++n) {
        u64* dst = row(m, n);
        for (i64 x = -floor_sqrt(n); x * x <= n; ++x) or_shifted(dst, row(m - 1, n - x * x), x);
      }
    }
  }

  bool contains(int m, i64 n, i64 t) const {
    if (t < -width_ || t > width_) return false;
    return test_bit(row(m, n), t + width_);
  }

  /// Nonnegative members, increasing.
  std::vector<i64> values(int m, i64 n) const {
    std::vector<i64> out;
    for (i64 t = 0; t <= width_; ++t) {
      if (contains(m, n, t)) out.push_back(t);
    }
    return out;
  }

  bool symmetric(int m, i64 n) const {
    for (i64 t = 1; t <= width_; ++t) {
      if (contains(m, n, t) != contains(m, n, -t)) return false;
    }
    return true;
  }

  int m_max() const { return m_max_; }
  i64 n_max() const { return n_max_; }

 private:
  u64* row(int m, i64 n) { return &bits_[(static_cast<std::size_t>(m) * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(n)) * words_]; }
  const u64* row(int m, i64 n) const {
    return &bits_[(static_cast<std::size_t>(m) * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(n)) * words_];
  }
  static void set_bit(u64* r, i64 i) { r[i >> 6] |= u64{1} << (i & 63); }
  static bool test_bit(const u64* r, i64 i) { return (r[i >> 6] >> (i & 63)) & 1; }

  // dst |= src shifted by x (bit-at-a-time; simple over fast).
  void or_shifted(u64* dst, const u64* src, i64 x) const {
    for (std::size_t w = 0; w < words_; ++w) {
      for (u64 word = src[w]; word;) {
        const int b = __builtin_ctzll(word);
        word &= word - 1;
        const i64 i = static_cast<i64>(w * 64) + b + x;
        if (i >= 0 && i < static_cast<i64>(span_)) set_bit(dst, i);
      }
    }
  }

  int m_max_;
  i64 n_max_;
  i64 width_;
  std::size_t span_ = 0;
  std::size_t words_ = 0;
  std::vector<u64> bits_;
};

/// Every integer vector of length m with squared norm n.
inline std::vector<std::vector<i64>> vectors_of_norm(int m, i64 n) {
  std::vector<std::vector<i64>> out;
  std::vector<i64> cur;
  auto rec = [&](auto&& self, int left, i64 rem) -> void {
    if (left == 0) {
      if (rem == 0) out.push_back(cur);
      return;
    }
    for (i64 x = -floor_sqrt(rem); x * x <= rem; ++x) {
      cur.push_back(x);
      self(self, left - 1, rem - x * x);
      cur.pop_back();
    }
  };
  rec(rec, m, n);
  return out;
}

/// Nonnegative values of c . x over integer x with |x|^2 = n.
inline std::vector<i64> linear_set(const std::vector<i64>& coeffs, i64 n) {
  std::vector<i64> out;
  for (const auto& x : vectors_of_norm(static_cast<int>(coeffs.size()), n)) {
    i64 t = 0;
    for (std::size_t i = 0; i < x.size(); ++i) t += coeffs[i] * x[i];
    if (t >= 0) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Number of nonincreasing nonnegative m-tuples with square sum n, counted
/// by plain recursion and capped at `cap`.
inline i64 count_partitions(int m, i64 n, i64 cap = -1) {
  i64 count = 0;
  auto rec = [&](auto&& self, int left, i64 rem, i64 max_part) -> void {
    if (cap >= 0 && count >= cap) return;
    if (left == 0) {
      if (rem == 0) ++count;
      return;
    }
    for (i64 x = std::min(max_part, floor_sqrt(rem)); x >= 0; --x) self(self, left - 1, rem - x * x, x);
  };
  rec(rec, m, n, floor_sqrt(n));
  return count;
}

/// For each (a, b) with a, b <= limit: the inner products u . v over integer
/// vectors u, v in Z^m with |u|^2 = a and |v|^2 = b. The form aX^2 + 2hXY + bY^2
/// is a sum of m squares of linear forms iff h is among them (Gram matrix).
class GramTable {
 public:
  GramTable(int m, i64 limit) : limit_(limit), seen_(static_cast<std::size_t>((limit + 1) * (limit + 1))) {
    std::vector<std::vector<std::vector<i64>>> by_norm(static_cast<std::size_t>(limit + 1));
    for (i64 a = 0; a <= limit; ++a) by_norm[static_cast<std::size_t>(a)] = vectors_of_norm(m, a);
    for (i64 a = 0; a <= limit; ++a) {
      // Signed permutations act on u and v together, so u may be taken
      // nonincreasing and nonnegative.
      std::vector<std::vector<i64>> canonical;
      for (const auto& u : by_norm[static_cast<std::size_t>(a)]) {
        if (std::is_sorted(u.begin(), u.end(), std::greater<>()) && (u.empty() || u.back() >= 0)) {
          canonical.push_back(u);
        }
      }
      for (i64 b = 0; b <= limit; ++b) {
        auto& hs = seen_[static_cast<std::size_t>(a * (limit + 1) + b)];
        for (const auto& u : canonical) {
          for (const auto& v : by_norm[static_cast<std::size_t>(b)]) {
            i64 h = 0;
            for (std::size_t i = 0; i < u.size(); ++i) h += u[i] * v[i];
            hs.push_back(h);
          }
        }
        std::sort(hs.begin(), hs.end());
        hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
      }
    }
  }

  bool representable(i64 a, i64 h, i64 b) const {
    const auto& hs = seen_[static_cast<std::size_t>(a * (limit_ + 1) + b)];
    return std::binary_search(hs.begin(), hs.end(), h);
  }

 private:
  i64 limit_;
  std::vector<std::vector<i64>> seen_;
};

}  // namespace ref
