#include "lsqmc/quadfield.hpp"

#include <cmath>
#include <limits>
#include <regex>
#include <sstream>

#include "lsqmc/error.hpp"

namespace lsqmc {

namespace {

int sgn(const BigInt& v) { return mpz_sgn(v.get_mpz_t()); }

// Sign of a + b*sqrt(d) for squarefree d (d == 0 means the b term is absent).
int sign_of(const BigInt& a, const BigInt& b, std::int64_t d) {
  const int sa = sgn(a);
  const int sb = d == 0 ? 0 : sgn(b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const BigInt lhs = a * a;
  const BigInt rhs = b * b * BigInt(static_cast<long>(d));
  return lhs > rhs ? sa : sb;
}

BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

// floor((a + b*sqrt(d)) / c) for c > 0. The candidate comes from an integer
// bracket of |b|*sqrt(d) and is confirmed with exact sign tests.
BigInt floor_of(const BigInt& a, const BigInt& b, const BigInt& c, std::int64_t d) {
  if (d == 0 || b == 0) return floor_div(a, c);
  const BigInt r = isqrt(b * b * BigInt(static_cast<long>(d)));
  BigInt f = b > 0 ? floor_div(a + r, c) : floor_div(a - r - 1, c);
  // value - f >= 0  and  value - (f + 1) < 0
  while (sign_of(a - f * c, b, d) < 0) f -= 1;
  while (sign_of(a - (f + 1) * c, b, d) >= 0) f += 1;
  return f;
}

std::size_t bit_length(const BigInt& v) {
  return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

}  // namespace

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw Error(ErrorKind::OutOfRange, "isqrt of a negative number");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

SquarefreeSplit squarefree_split(std::int64_t n) {
  if (n < 0) throw Error(ErrorKind::OutOfRange, "negative radicand");
  if (n == 0) return {0, 0};
  std::int64_t factor = 1;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    while (rest % (p * p) == 0) {
      rest /= p * p;
      factor *= p;
    }
  }
  return {factor, rest};
}

QuadExact::QuadExact(BigInt a, BigInt b, BigInt c, std::int64_t d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(0) {
  if (d < 0) throw Error(ErrorKind::InvalidParams, "radicand must be non-negative");
  const auto split = squarefree_split(d);
  b_ *= BigInt(static_cast<long>(split.factor));
  d_ = split.radicand;
  canonicalize();
}

QuadExact QuadExact::rational(const BigInt& num, const BigInt& den) {
  return QuadExact(num, 0, den, 0);
}

QuadExact QuadExact::sqrt_of(std::int64_t n) { return QuadExact(0, 1, 1, n); }

void QuadExact::canonicalize() {
  if (c_ == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
    d_ = 0;
  }
  if (d_ == 0 || b_ == 0) {
    b_ = 0;
    d_ = 0;
  }
  if (c_ < 0) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
  }
  BigInt g = gcd(a_, b_);
  g = gcd(g, c_);
  if (g > 1) {
    mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(c_.get_mpz_t(), c_.get_mpz_t(), g.get_mpz_t());
  }
}

std::int64_t QuadExact::common_radicand(const QuadExact& lhs, const QuadExact& rhs) {
  if (lhs.d_ == rhs.d_ || rhs.d_ == 0) return lhs.d_;
  if (lhs.d_ == 0) return rhs.d_;
  throw Error(ErrorKind::RadicandMismatch, "sqrt(" + std::to_string(lhs.d_) + ") vs sqrt(" +
                                               std::to_string(rhs.d_) + ")");
}

int QuadExact::sign() const { return sign_of(a_, b_, d_); }

BigInt QuadExact::floor() const { return floor_of(a_, b_, c_, d_); }

QuadExact QuadExact::operator-() const {
  QuadExact out = *this;
  out.a_ = -out.a_;
  out.b_ = -out.b_;
  return out;
}

QuadExact QuadExact::conjugate() const {
  QuadExact out = *this;
  out.b_ = -out.b_;
  return out;
}

QuadExact& QuadExact::operator+=(const QuadExact& rhs) {
  const std::int64_t d = common_radicand(*this, rhs);
  if (c_ == rhs.c_) {
    a_ += rhs.a_;
    b_ += rhs.b_;
  } else {
    a_ = a_ * rhs.c_ + rhs.a_ * c_;
    b_ = b_ * rhs.c_ + rhs.b_ * c_;
    c_ *= rhs.c_;
  }
  d_ = d;
  canonicalize();
  return *this;
}

QuadExact& QuadExact::operator-=(const QuadExact& rhs) { return *this += -rhs; }

QuadExact& QuadExact::operator*=(const QuadExact& rhs) {
  const std::int64_t d = common_radicand(*this, rhs);
  const BigInt dd(static_cast<long>(d));
  BigInt na = a_ * rhs.a_ + b_ * rhs.b_ * dd;
  BigInt nb = a_ * rhs.b_ + b_ * rhs.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  c_ *= rhs.c_;
  d_ = d;
  canonicalize();
  return *this;
}

QuadExact& QuadExact::operator*=(const BigInt& rhs) {
  a_ *= rhs;
  b_ *= rhs;
  canonicalize();
  return *this;
}

QuadExact QuadExact::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d)
  const BigInt norm = a_ * a_ - b_ * b_ * BigInt(static_cast<long>(d_));
  QuadExact out;
  out.a_ = a_ * c_;
  out.b_ = -b_ * c_;
  out.c_ = norm;
  out.d_ = d_;
  out.canonicalize();
  return out;
}

QuadExact& QuadExact::operator/=(const QuadExact& rhs) {
  common_radicand(*this, rhs);
  if (rhs.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero");
  return *this *= rhs.inverse();
}

QuadExact QuadExact::pow(std::int64_t exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  QuadExact result(1);
  QuadExact base = *this;
  auto e = static_cast<std::uint64_t>(exponent);
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return result;
}

std::strong_ordering operator<=>(const QuadExact& lhs, const QuadExact& rhs) {
  const std::int64_t d = QuadExact::common_radicand(lhs, rhs);
  const BigInt a = lhs.a_ * rhs.c_ - rhs.a_ * lhs.c_;
  const BigInt b = lhs.b_ * rhs.c_ - rhs.b_ * lhs.c_;
  const int s = sign_of(a, b, d);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double QuadExact::to_double() const {
  if (is_zero()) return 0.0;
  if (sign() < 0) return -(-*this).to_double();
  // Scale by 2^p so the exact floor carries 62..64 significant bits.
  const long sqrt_bits = static_cast<long>(bit_length(BigInt(static_cast<long>(d_))) / 2 + 1);
  const long numer_bits = std::max(static_cast<long>(bit_length(a_)),
                                   static_cast<long>(bit_length(b_)) + sqrt_bits);
  long p = 64 - (numer_bits - static_cast<long>(bit_length(c_)));
  for (int attempt = 0; attempt < 64; ++attempt) {
    BigInt sa = a_, sb = b_, sc = c_;
    if (p >= 0) {
      mpz_mul_2exp(sa.get_mpz_t(), sa.get_mpz_t(), static_cast<mp_bitcnt_t>(p));
      mpz_mul_2exp(sb.get_mpz_t(), sb.get_mpz_t(), static_cast<mp_bitcnt_t>(p));
    } else {
      mpz_mul_2exp(sc.get_mpz_t(), sc.get_mpz_t(), static_cast<mp_bitcnt_t>(-p));
    }
    const BigInt m = floor_of(sa, sb, sc, d_);
    const auto bits = static_cast<long>(bit_length(BigInt(::abs(m))));
    if (bits < 62) {
      p += 62 - bits + (bits == 0 ? 64 : 0);
      continue;
    }
    if (-p > std::numeric_limits<double>::max_exponent) {
      throw Error(ErrorKind::Overflow, "magnitude exceeds binary64 range: " + to_string());
    }
    // Round m + frac to 53 bits, nearest with ties to even.
    const auto shift = static_cast<mp_bitcnt_t>(bits - 53);
    BigInt q, rem, half(1);
    mpz_fdiv_q_2exp(q.get_mpz_t(), m.get_mpz_t(), shift);
    mpz_fdiv_r_2exp(rem.get_mpz_t(), m.get_mpz_t(), shift);
    mpz_mul_2exp(half.get_mpz_t(), half.get_mpz_t(), shift - 1);
    const bool exact = sign_of(sa - m * sc, sb, d_) == 0;
    if (rem > half || (rem == half && (!exact || mpz_odd_p(q.get_mpz_t())))) q += 1;
    const double r = std::ldexp(q.get_d(), static_cast<int>(static_cast<long>(shift) - p));
    if (std::isinf(r)) throw Error(ErrorKind::Overflow, "magnitude exceeds binary64 range");
    return r;
  }
  return 0.0;  // unreachable for non-zero values
}

std::string QuadExact::to_string() const {
  std::ostringstream os;
  os << '(' << a_.get_str() << (b_ < 0 ? '-' : '+') << BigInt(::abs(b_)).get_str() << "*sqrt("
     << d_ << "))/" << c_.get_str();
  return os.str();
}

QuadExact QuadExact::parse(std::string_view text) {
  static const std::regex pattern(
      R"(^\s*\(\s*([+-]?[0-9]+)\s*([+-])\s*([+-]?[0-9]+)\s*\*\s*sqrt\(\s*([0-9]+)\s*\)\s*\)\s*/\s*([+-]?[0-9]+)\s*$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(text.begin(), text.end(), m, pattern)) {
    throw Error(ErrorKind::ParseError, "expected (a+b*sqrt(d))/c, got '" + std::string(text) + "'");
  }
  BigInt a(m[1].str());
  BigInt b(m[3].str()[0] == '+' ? m[3].str().substr(1) : m[3].str());
  if (m[2].str() == "-") b = -b;
  BigInt c(m[5].str()[0] == '+' ? m[5].str().substr(1) : m[5].str());
  const std::string dtext = m[4].str();
  if (dtext.size() > 17) throw Error(ErrorKind::ParseError, "radicand too large");
  return QuadExact(a, b, c, std::stoll(dtext));
}

QuadExact odd_distance(const QuadExact& v) {
  const BigInt f = v.floor();
  const bool f_odd = mpz_odd_p(f.get_mpz_t()) != 0;
  // v lies in [f, f+1): the nearest odd integer is f (if odd) or f+1.
  if (f_odd) return v - QuadExact(f);
  return QuadExact(BigInt(f + 1)) - v;
}

std::size_t QuadExactHash::operator()(const QuadExact& v) const noexcept {
  const auto h = [](const BigInt& z) {
    std::size_t out = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
    const std::size_t limbs = mpz_size(z.get_mpz_t());
    for (std::size_t i = 0; i < limbs; ++i) {
      out = out * 0x100000001b3ULL ^ static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), i));
    }
    return out;
  };
  std::size_t seed = h(v.a());
  seed ^= h(v.b()) + 0x9e3779b97f4a7c15ULL + (seed << 6U) + (seed >> 2U);
  seed ^= h(v.c()) + 0x9e3779b97f4a7c15ULL + (seed << 6U) + (seed >> 2U);
  seed ^= static_cast<std::size_t>(v.radicand()) + (seed << 6U) + (seed >> 2U);
  return seed;
}

}  // namespace lsqmc
