#pragma once

// Integer primitives shared by every criterion: checked 64-bit arithmetic,
// deterministic primality, factorization (trial division + Pollard-Brent),
// p-adic valuations, Legendre symbols, squarefree splitting and the
// sum-of-k-squares decision procedures.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sumsq/errors.hpp"

namespace sumsq {

/// All public inputs are bounded by 2^62.
inline constexpr std::int64_t kWidthBound = std::int64_t{1} << 62;

inline void check_width(std::int64_t v, const char* what) {
  if (v > kWidthBound || v < -kWidthBound) {
    throw OverflowError(std::string(what) + " exceeds the 2^62 width bound");
  }
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("64-bit multiplication overflow");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("64-bit addition overflow");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("64-bit subtraction overflow");
  return r;
}

/// floor(sqrt(n)) for n >= 0, exact over the whole 64-bit range.
constexpr std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw DomainError("isqrt of a negative number");
  if (n < 2) return n;
  auto u = static_cast<std::uint64_t>(n);
  // Newton from an upper bound; converges monotonically downward.
  std::uint64_t x = std::uint64_t{1} << ((std::bit_width(u) + 1) / 2);
  while (true) {
    std::uint64_t y = (x + u / x) / 2;
    if (y >= x) break;
    x = y;
  }
  return static_cast<std::int64_t>(x);
}

constexpr bool is_square(std::int64_t n) {
  if (n < 0) return false;
  // Quadratic residues mod 16 are {0,1,4,9}.
  switch (n & 15) {
    case 0: case 1: case 4: case 9: break;
    default: return false;
  }
  std::int64_t r = isqrt(n);
  return r * r == n;
}

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Montgomery multiplication modulo an odd n < 2^63, with R = 2^64.
class Montgomery {
 public:
  explicit Montgomery(u64 n) : n_(n) {
    u64 inv = n;  // Newton iteration doubles the correct low bits each step
    for (int k = 0; k < 5; ++k) inv *= 2 - n * inv;
    neg_inv_ = 0 - inv;
    const u64 r = (0 - n) % n;
    r2_ = static_cast<u64>(static_cast<u128>(r) * r % n);
  }

  u64 modulus() const { return n_; }
  u64 to(u64 a) const { return reduce(static_cast<u128>(a % n_) * r2_); }
  u64 from(u64 a) const { return reduce(a); }
  u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }

  u64 pow(u64 base, u64 exp) const {
    u64 result = to(1);
    while (exp) {
      if (exp & 1) result = mul(result, base);
      base = mul(base, base);
      exp >>= 1;
    }
    return result;
  }

 private:
  u64 reduce(u128 t) const {
    const u64 m = static_cast<u64>(t) * neg_inv_;
    const u64 r = static_cast<u64>((t + static_cast<u128>(m) * n_) >> 64);
    return r >= n_ ? r - n_ : r;
  }

  u64 n_;
  u64 neg_inv_;
  u64 r2_;
};

inline bool miller_rabin_witness(const Montgomery& mont, u64 a, u64 d, int s) {
  const u64 one = mont.to(1);
  const u64 minus_one = mont.modulus() - one;
  u64 x = mont.pow(mont.to(a), d);
  if (x == one || x == minus_one) return false;
  for (int r = 1; r < s; ++r) {
    x = mont.mul(x, x);
    if (x == minus_one) return false;
  }
  return true;
}

// Odd primes below kTrialLimit with their inverses mod 2^64: for odd p,
// n is divisible by p iff n * inv <= lim, and then n / p == n * inv.
inline constexpr std::int64_t kTrialLimit = 1'000'000;

// rest is divisible by p iff rest * inv <= lim.
struct TrialDivisor {
  u64 p;
  u64 square;
  u64 inv;
  u64 lim;
};

inline const std::vector<TrialDivisor>& trial_divisors() {
  static const std::vector<TrialDivisor> table = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<TrialDivisor> out;
    out.reserve(78'500);
    for (std::int64_t i = 3; i <= kTrialLimit; i += 2) {
      if (composite[i]) continue;
      const auto p = static_cast<u64>(i);
      u64 inv = p;  // Newton iteration doubles the correct low bits each step
      for (int k = 0; k < 5; ++k) inv *= 2 - p * inv;
      out.push_back({p, p * p, inv, ~u64{0} / p});
      for (std::int64_t j = i * i; j <= kTrialLimit; j += 2 * i) composite[j] = true;
    }
    return out;
  }();
  return table;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the witness set {2..37} is exact below 3.3e24.
inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  static constexpr std::int64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::int64_t p : kSmall) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  auto un = static_cast<detail::u64>(n);
  detail::u64 d = un - 1;
  int s = std::countr_zero(d);
  d >>= s;
  const detail::Montgomery mont(un);
  if (un < (detail::u64{1} << 32)) {
    // {2, 7, 61} is exact below 4759123141.
    for (detail::u64 a : {2, 7, 61}) {
      if (detail::miller_rabin_witness(mont, a, d, s)) return false;
    }
    return true;
  }
  for (std::int64_t a : kSmall) {
    if (detail::miller_rabin_witness(mont, static_cast<detail::u64>(a), d, s)) return false;
  }
  return true;
}

struct PrimePower {
  std::int64_t prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime-power decomposition; primes strictly increasing, exponents >= 1.
struct Factorization {
  std::int64_t value = 1;
  std::vector<PrimePower> factors;

  int exponent_of(std::int64_t p) const {
    auto it = std::lower_bound(factors.begin(), factors.end(), p,
                               [](const PrimePower& f, std::int64_t q) { return f.prime < q; });
    return (it != factors.end() && it->prime == p) ? it->exponent : 0;
  }

  std::int64_t recompose() const {
    std::int64_t r = 1;
    for (const auto& f : factors) {
      for (int i = 0; i < f.exponent; ++i) r = checked_mul(r, f.prime);
    }
    return r;
  }
};

namespace detail {

// Brent's variant of Pollard rho; returns a nontrivial factor of an odd
// composite n.
inline u64 pollard_brent(u64 n) {
  constexpr u64 kBatch = 128;
  const Montgomery mont(n);
  for (u64 c = 1;; ++c) {
    // Iterates v -> v^2 + c in Montgomery form; gcds are unaffected since R
    // is a unit mod n.
    u64 y = mont.to(2), x = y, ys = y, q = mont.to(1), g = 1;
    auto f = [&](u64 v) {
      const u64 w = mont.mul(v, v) + c;
      return w >= n ? w - n : w;
    };
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = f(y);
          q = mont.mul(q, x > y ? x - y : y - x);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      // Batch overshot; step back one at a time.
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

// Prime factors (with repetition) of an odd n > 1 that has no factor below
// the trial limit. At most 3 of them fit under 2^62.
struct LargeFactors {
  u64 p[8];
  int count = 0;
};

inline void split_large(u64 n, LargeFactors& out) {
  if (n == 1) return;
  if (is_prime(static_cast<std::int64_t>(n))) {
    out.p[out.count++] = n;
    return;
  }
  const auto r = static_cast<u64>(isqrt(static_cast<std::int64_t>(n)));
  if (r * r == n) {
    split_large(r, out);
    split_large(r, out);
    return;
  }
  const u64 f = pollard_brent(n);
  split_large(f, out);
  split_large(n / f, out);
}

// Cofactors above this are tested for primality once trial division has
// passed kEarlyPrimeCheck, which saves sweeping up to sqrt of a large prime.
inline constexpr u64 kEarlyPrimeCheck = 1024;

}  // namespace detail

/// Calls visit(prime, exponent) for each prime power of n in increasing order
/// of prime, stopping as soon as visit returns false. Returns false iff it
/// stopped early. Trial division below 10^6, then Miller-Rabin and
/// Pollard-Brent on whatever is left.
template <class Visit>
bool visit_prime_factors(std::int64_t n, Visit&& visit) {
  if (n < 1) throw DomainError("factorization input must be positive");
  check_width(n, "factorization input");
  auto rest = static_cast<detail::u64>(n);
  if (int tz = std::countr_zero(rest); tz > 0) {
    if (!visit(std::int64_t{2}, tz)) return false;
    rest >>= tz;
  }
  const auto& table = detail::trial_divisors();
  // Divide out d.p; false when the visitor asks to stop.
  auto strip = [&](const detail::TrialDivisor& d) {
    detail::u64 q = rest * d.inv;
    if (q > d.lim) return true;
    int e = 0;
    do {
      rest = q;
      ++e;
      q = rest * d.inv;
    } while (q <= d.lim);
    return static_cast<bool>(visit(static_cast<std::int64_t>(d.p), e));
  };
  std::size_t i = 0;
  for (; i < table.size() && table[i].p <= detail::kEarlyPrimeCheck; ++i) {
    if (table[i].square > rest) return rest == 1 || visit(static_cast<std::int64_t>(rest), 1);
    if (!strip(table[i])) return false;
  }
  if (rest > 1 && is_prime(static_cast<std::int64_t>(rest))) return visit(static_cast<std::int64_t>(rest), 1);
  for (; i < table.size(); ++i) {
    if (table[i].square > rest) return rest == 1 || visit(static_cast<std::int64_t>(rest), 1);
    if (!strip(table[i])) return false;
  }
  if (rest == 1) return true;

  detail::LargeFactors big;
  detail::split_large(rest, big);
  std::sort(big.p, big.p + big.count);
  for (int i = 0; i < big.count;) {
    int j = i;
    while (j < big.count && big.p[j] == big.p[i]) ++j;
    if (!visit(static_cast<std::int64_t>(big.p[i]), j - i)) return false;
    i = j;
  }
  return true;
}

/// Factor n in [1, 2^62].
inline Factorization factorize(std::int64_t n) {
  if (n < 1) throw DomainError("factorize: input must be positive");
  Factorization out;
  out.value = n;
  visit_prime_factors(n, [&](std::int64_t p, int e) {
    out.factors.push_back({p, e});
    return true;
  });
  return out;
}

namespace detail {

inline void require_prime(std::int64_t p) {
  if (!is_prime(p)) throw DomainError("expected a prime, got " + std::to_string(p));
}

}  // namespace detail

/// v_p(n): the exponent of the prime p in n != 0.
inline int valuation(std::int64_t n, std::int64_t p) {
  if (n == 0) throw DomainError("valuation of zero is undefined");
  detail::require_prime(p);
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

/// n with every factor p removed; the sign of n is kept.
inline std::int64_t p_free_part(std::int64_t n, std::int64_t p) {
  if (n == 0) throw DomainError("p-free part of zero is undefined");
  detail::require_prime(p);
  while (n % p == 0) n /= p;
  return n;
}

/// Jacobi symbol (a/n) for odd n > 0, by quadratic reciprocity.
inline int jacobi(std::int64_t a, std::int64_t n) {
  if (n <= 0 || n % 2 == 0) throw DomainError("jacobi: modulus must be odd and positive");
  std::uint64_t x = static_cast<std::uint64_t>(((a % n) + n) % n);
  std::uint64_t y = static_cast<std::uint64_t>(n);
  int sign = 1;
  while (x != 0) {
    int tz = std::countr_zero(x);
    x >>= tz;
    // (2/y) = -1 iff y = 3, 5 mod 8
    if ((tz & 1) && ((y & 7) == 3 || (y & 7) == 5)) sign = -sign;
    if ((x & 3) == 3 && (y & 3) == 3) sign = -sign;
    std::swap(x, y);
    x %= y;
  }
  return y == 1 ? sign : 0;
}

inline void check_legendre_args(std::int64_t n, std::int64_t p) {
  if (p == 2) throw DomainError("legendre: p must be odd");
  detail::require_prime(p);
  if (n % p == 0) throw DomainError("legendre: p divides n");
}

/// Legendre symbol (n/p) for an odd prime p not dividing n.
inline int legendre(std::int64_t n, std::int64_t p) {
  check_legendre_args(n, p);
  return jacobi(n, p);
}

/// Same value as legendre(), computed by Euler's criterion n^((p-1)/2) mod p.
inline int legendre_euler(std::int64_t n, std::int64_t p) {
  check_legendre_args(n, p);
  auto up = static_cast<detail::u64>(p);
  auto r = static_cast<detail::u64>(((n % p) + p) % p);
  return detail::powmod(r, (up - 1) / 2, up) == 1 ? 1 : -1;
}

/// n = d0 * d1^2 with d0 squarefree.
struct SquarefreeSplit {
  std::int64_t d0;
  std::int64_t d1;

  friend bool operator==(const SquarefreeSplit&, const SquarefreeSplit&) = default;
};

inline SquarefreeSplit squarefree_split(const Factorization& f) {
  SquarefreeSplit s{1, 1};
  for (const auto& [p, e] : f.factors) {
    if (e & 1) s.d0 *= p;
    for (int i = 0; i < e / 2; ++i) s.d1 *= p;
  }
  return s;
}

inline SquarefreeSplit squarefree_split(std::int64_t n) {
  if (n < 1) throw DomainError("squarefree_split: input must be positive");
  return squarefree_split(factorize(n));
}

/// Legendre's three-square theorem: n >= 0 is a sum of three squares iff it
/// is not of the form 4^a (8b + 7).
constexpr bool is_sum_of_three_squares(std::int64_t n) {
  if (n < 0) return false;
  if (n == 0) return true;
  while ((n & 3) == 0) n >>= 2;
  return (n & 7) != 7;
}

/// Fermat: n >= 0 is a sum of two squares iff each prime = 3 mod 4 has even
/// exponent.
inline bool is_sum_of_two_squares(const Factorization& f) {
  return std::all_of(f.factors.begin(), f.factors.end(),
                     [](const PrimePower& pp) { return pp.prime % 4 != 3 || pp.exponent % 2 == 0; });
}

inline bool is_sum_of_two_squares(std::int64_t n) {
  if (n < 0) return false;
  if (n == 0) return true;
  return is_sum_of_two_squares(factorize(n));
}

/// Membership of n in sos(k), the sums of k integer squares.
inline bool is_sos(std::int64_t n, int k) {
  if (k < 1) throw DomainError("is_sos: k must be positive");
  if (n < 0) return false;
  check_width(n, "is_sos input");
  switch (k) {
    case 1: return is_square(n);
    case 2: return is_sum_of_two_squares(n);
    case 3: return is_sum_of_three_squares(n);
    default: return true;
  }
}

}  // namespace sumsq
