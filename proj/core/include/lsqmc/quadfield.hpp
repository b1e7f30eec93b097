#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lsqmc {

using BigInt = mpz_class;

inline BigInt to_bigint(std::uint64_t v) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  return BigInt(static_cast<unsigned long>(v));
}

/// Largest r with r*r <= n; n must be non-negative.
BigInt isqrt(const BigInt& n);

/// Writes n = f*f*d with d squarefree (trial division; n is small here).
struct SquarefreeSplit {
  std::int64_t factor;
  std::int64_t radicand;
};
SquarefreeSplit squarefree_split(std::int64_t n);

/// Exact element (a + b*sqrt(d)) / c of the real quadratic field Q(sqrt(d)).
///
/// Values are kept in canonical form: c > 0, gcd(a, b, c) = 1, d squarefree,
/// and rationals are stored with b = 0 and d = 0. Structural equality is
/// therefore semantic equality.
///
/// Binary operations require both operands to share a radicand unless one of
/// them is rational; otherwise they throw ErrorKind::RadicandMismatch.
class QuadExact {
 public:
  QuadExact() = default;
  QuadExact(long value) : a_(value) {}  // NOLINT(google-explicit-constructor)
  explicit QuadExact(const BigInt& value) : a_(value) {}
  /// (a + b*sqrt(d)) / c with any non-negative d; d is reduced to its
  /// squarefree part and the result canonicalized.
  QuadExact(BigInt a, BigInt b, BigInt c, std::int64_t d);

  static QuadExact rational(const BigInt& num, const BigInt& den);
  /// sqrt(n) for a non-negative integer n.
  static QuadExact sqrt_of(std::int64_t n);

  const BigInt& a() const noexcept { return a_; }
  const BigInt& b() const noexcept { return b_; }
  const BigInt& c() const noexcept { return c_; }
  std::int64_t radicand() const noexcept { return d_; }

  bool is_rational() const noexcept { return d_ == 0; }
  bool is_integer() const noexcept { return d_ == 0 && c_ == 1; }
  bool is_zero() const noexcept { return d_ == 0 && a_ == 0; }

  /// Exact sign of the real value: -1, 0 or +1.
  int sign() const;
  BigInt floor() const;
  QuadExact abs() const { return sign() < 0 ? -*this : *this; }
  QuadExact inverse() const;
  /// Integer power; negative exponents invert (zero base throws).
  QuadExact pow(std::int64_t exponent) const;
  /// The Galois conjugate (a - b*sqrt(d)) / c.
  QuadExact conjugate() const;

  /// Nearest binary64 value, within 2 ulp. Never used for decisions.
  double to_double() const;
  /// "(a+b*sqrt(d))/c" with decimal integers; parse() reads it back.
  std::string to_string() const;
  static QuadExact parse(std::string_view text);

  QuadExact operator-() const;
  QuadExact& operator+=(const QuadExact& rhs);
  QuadExact& operator-=(const QuadExact& rhs);
  QuadExact& operator*=(const QuadExact& rhs);
  QuadExact& operator/=(const QuadExact& rhs);
  QuadExact& operator*=(const BigInt& rhs);

  friend QuadExact operator+(QuadExact lhs, const QuadExact& rhs) { return lhs += rhs; }
  friend QuadExact operator-(QuadExact lhs, const QuadExact& rhs) { return lhs -= rhs; }
  friend QuadExact operator*(QuadExact lhs, const QuadExact& rhs) { return lhs *= rhs; }
  friend QuadExact operator/(QuadExact lhs, const QuadExact& rhs) { return lhs /= rhs; }
  friend QuadExact operator*(QuadExact lhs, const BigInt& rhs) { return lhs *= rhs; }

  friend bool operator==(const QuadExact& lhs, const QuadExact& rhs) {
    return lhs.d_ == rhs.d_ && lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_ && lhs.c_ == rhs.c_;
  }
  /// Exact ordering; throws RadicandMismatch for incomparable values.
  friend std::strong_ordering operator<=>(const QuadExact& lhs, const QuadExact& rhs);

 private:
  void canonicalize();
  static std::int64_t common_radicand(const QuadExact& lhs, const QuadExact& rhs);

  BigInt a_{0};
  BigInt b_{0};
  BigInt c_{1};
  std::int64_t d_{0};
};

/// Distance from v to the nearest odd integer; lies in [0, 1] and is 1
/// exactly when v is an even integer.
QuadExact odd_distance(const QuadExact& v);

struct QuadExactHash {
  std::size_t operator()(const QuadExact& v) const noexcept;
};

}  // namespace lsqmc
