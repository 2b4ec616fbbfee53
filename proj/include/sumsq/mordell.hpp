#pragma once

// Representability of an integral binary form aX^2 + 2hXY + bY^2 as a sum of
// m squares of integral linear forms (Mordell's criteria).

#include <cstdint>
#include <numeric>
#include <optional>
#include <string_view>
#include <utility>

#include "sumsq/arith.hpp"

namespace sumsq {

/// aX^2 + 2hXY + bY^2. A nonzero form with a == 0 < b is stored with a and b
/// swapped, so a > 0 whenever the form is nonzero and positive semi-definite.
class BinaryForm {
 public:
  BinaryForm(std::int64_t a, std::int64_t h, std::int64_t b) : a_(a), h_(h), b_(b) {
    check_width(a, "form coefficient a");
    check_width(h, "form coefficient h");
    check_width(b, "form coefficient b");
    if (a_ == 0 && b_ > 0) std::swap(a_, b_);
  }

  std::int64_t a() const { return a_; }
  std::int64_t h() const { return h_; }
  std::int64_t b() const { return b_; }

  /// ab - h^2, the Gram determinant.
  std::int64_t delta() const { return checked_sub(checked_mul(a_, b_), checked_mul(h_, h_)); }

  /// gcd(a, h, b)
  std::int64_t content() const { return std::gcd(std::gcd(a_, h_), b_); }
  /// gcd(a, 2h, b); equals content() or twice it.
  std::int64_t even_content() const { return std::gcd(std::gcd(a_, checked_mul(2, h_)), b_); }

  bool is_zero() const { return a_ == 0 && h_ == 0 && b_ == 0; }

  friend bool operator==(const BinaryForm&, const BinaryForm&) = default;

 private:
  std::int64_t a_;
  std::int64_t h_;
  std::int64_t b_;
};

enum class MordellCondition {
  psd,         // form is not positive semi-definite
  alpha,       // v_2(d) odd but gcd(a,2h,b) != d
  beta,        // (-a_p / p) != 1 at odd p, v_p(delta) odd, v_p(a) even
  gamma,       // (-a_p delta_p / p) != 1 at odd p, v_p(delta) odd, v_p(a) odd
  delta_cond,  // (-delta_p / p) != 1 at odd p, v_p(delta) even, v_p(d) odd
  sos1_delta,  // delta not a square (m = 1, 2)
  sos2_gcd,    // d not a sum of two squares (m = 2)
  sos3_delta,  // delta not a sum of three squares (m = 4)
  sos_m_a,     // rank one form t(rX+sY)^2 with t (equivalently a) not in sos(m)
};

constexpr std::string_view to_string(MordellCondition c) {
  switch (c) {
    case MordellCondition::psd: return "psd";
    case MordellCondition::alpha: return "alpha";
    case MordellCondition::beta: return "beta";
    case MordellCondition::gamma: return "gamma";
    case MordellCondition::delta_cond: return "delta_cond";
    case MordellCondition::sos1_delta: return "sos1_delta";
    case MordellCondition::sos2_gcd: return "sos2_gcd";
    case MordellCondition::sos3_delta: return "sos3_delta";
    case MordellCondition::sos_m_a: return "sos_m_a";
  }
  return "?";
}

struct MordellVerdict {
  bool representable = true;
  std::optional<MordellCondition> failed_condition;
  std::optional<std::int64_t> witness_prime;

  static MordellVerdict yes() { return {}; }
  static MordellVerdict no(MordellCondition c, std::optional<std::int64_t> p = std::nullopt) {
    return {false, c, p};
  }
};

/// Hurwitz: a >= 0, b >= 0 and ab - h^2 >= 0.
inline bool is_psd(const BinaryForm& f) { return f.a() >= 0 && f.b() >= 0 && f.delta() >= 0; }

/// Degenerate case delta == 0: the form is t(rX + sY)^2 and is a sum of m
/// squares iff a is.
inline MordellVerdict rank_zero_delta(const BinaryForm& f, int m) {
  if (m < 1) throw DomainError("m must be positive");
  if (f.delta() != 0) throw DomainError("rank_zero_delta: form has nonzero determinant");
  if (f.is_zero()) return MordellVerdict::yes();
  if (f.a() <= 0) throw DomainError("rank_zero_delta: expected a > 0");
  return is_sos(f.a(), m) ? MordellVerdict::yes() : MordellVerdict::no(MordellCondition::sos_m_a);
}

namespace detail {

// -(x * y) mod p as a nonnegative residue.
inline std::int64_t neg_product_mod(std::int64_t x, std::int64_t y, std::int64_t p) {
  auto r = static_cast<__int128>(((x % p) + p) % p) * (((y % p) + p) % p) % p;
  return static_cast<std::int64_t>((p - r) % p);
}

inline MordellVerdict three_squares_verdict(const BinaryForm& f, std::int64_t delta) {
  const std::int64_t a = f.a();
  const std::int64_t d = f.content();

  if ((valuation(d, 2) & 1) && f.even_content() != d) return MordellVerdict::no(MordellCondition::alpha);

  const Factorization fd = factorize(delta);
  // Conditions are checked in their listed order; each sweeps the odd
  // primes of delta upward. Primes of d all divide delta since d^2 | delta.
  for (const auto& [p, e] : fd.factors) {
    if (p == 2 || !(e & 1) || (valuation(a, p) & 1)) continue;
    if (jacobi(neg_product_mod(p_free_part(a, p), 1, p), p) != 1) {
      return MordellVerdict::no(MordellCondition::beta, p);
    }
  }
  for (const auto& [p, e] : fd.factors) {
    if (p == 2 || !(e & 1) || !(valuation(a, p) & 1)) continue;
    if (jacobi(neg_product_mod(p_free_part(a, p), p_free_part(delta, p), p), p) != 1) {
      return MordellVerdict::no(MordellCondition::gamma, p);
    }
  }
  for (const auto& [p, e] : fd.factors) {
    if (p == 2 || (e & 1) || d % p != 0 || !(valuation(d, p) & 1)) continue;
    if (jacobi(neg_product_mod(p_free_part(delta, p), 1, p), p) != 1) {
      return MordellVerdict::no(MordellCondition::delta_cond, p);
    }
  }
  return MordellVerdict::yes();
}

}  // namespace detail

/// Decide whether f is a sum of m squares of integral linear forms.
inline MordellVerdict representable(const BinaryForm& f, int m) {
  if (m < 1) throw DomainError("m must be positive");
  if (!is_psd(f)) return MordellVerdict::no(MordellCondition::psd);
  if (f.is_zero()) return MordellVerdict::yes();
  const std::int64_t delta = f.delta();
  if (delta == 0) return rank_zero_delta(f, m);

  // delta > 0 forces a, b > 0.
  switch (m) {
    case 1:
      return MordellVerdict::no(MordellCondition::sos1_delta);
    case 2:
      if (!is_square(delta)) return MordellVerdict::no(MordellCondition::sos1_delta);
      if (!is_sum_of_two_squares(f.content())) return MordellVerdict::no(MordellCondition::sos2_gcd);
      return MordellVerdict::yes();
    case 3:
      return detail::three_squares_verdict(f, delta);
    case 4:
      return is_sum_of_three_squares(delta) ? MordellVerdict::yes()
                                            : MordellVerdict::no(MordellCondition::sos3_delta);
    default:
      return MordellVerdict::yes();
  }
}

}  // namespace sumsq
