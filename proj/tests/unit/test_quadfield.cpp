#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "lsqmc/error.hpp"
#include "lsqmc/quadfield.hpp"

using lsqmc::BigInt;
using lsqmc::Error;
using lsqmc::ErrorKind;
using lsqmc::QuadExact;

namespace {

// (a + b sqrt(d)) / c
QuadExact q(long a, long b, long c, std::int64_t d) { return QuadExact(a, b, c, d); }

const QuadExact kGolden = q(-1, 1, 2, 5);  // (sqrt5 - 1) / 2

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no lsqmc::Error thrown";
  return ErrorKind::OutOfRange;
}

}  // namespace

TEST(QuadArith, GoldenSquared) { EXPECT_EQ(kGolden * kGolden, q(3, -1, 2, 5)); }

TEST(QuadArith, SelfDivisionIsOne) { EXPECT_EQ(q(-2, 1, 1, 5) / q(-2, 1, 1, 5), QuadExact(1)); }

TEST(QuadArith, GoldenCubed) { EXPECT_EQ(kGolden.pow(3), q(-2, 1, 1, 5)); }

TEST(QuadArith, CanonicalForm) {
  const QuadExact v = q(4, 2, -6, 20);  // (4 + 4 sqrt5) / -6
  EXPECT_EQ(v.radicand(), 5);
  EXPECT_GT(v.c(), 0);
  EXPECT_EQ(v, q(-2, -2, 3, 5));
  EXPECT_TRUE(q(3, 5, 1, 4).is_integer());  // sqrt4 folds into a
  EXPECT_EQ(q(3, 5, 1, 4), QuadExact(13));
  EXPECT_TRUE(QuadExact::rational(6, 4) == q(3, 0, 2, 7));
}

TEST(QuadArith, Errors) {
  EXPECT_EQ(kind_of([] { (void)(QuadExact::sqrt_of(2) + QuadExact::sqrt_of(3)); }),
            ErrorKind::RadicandMismatch);
  EXPECT_EQ(kind_of([] { (void)(QuadExact::sqrt_of(2) < QuadExact::sqrt_of(3)); }),
            ErrorKind::RadicandMismatch);
  EXPECT_EQ(kind_of([] { (void)(kGolden / QuadExact(0)); }), ErrorKind::DivisionByZero);
  EXPECT_EQ(kind_of([] { (void)QuadExact(0).pow(-1); }), ErrorKind::DivisionByZero);
  // Rationals mix with any radicand.
  EXPECT_EQ(QuadExact::sqrt_of(2) + QuadExact(1), q(1, 1, 1, 2));
}

TEST(QuadSign, Examples) {
  EXPECT_EQ(q(-2, 1, 1, 5).sign(), 1);
  EXPECT_EQ(q(0, 0, 1, 5).sign(), 0);
  EXPECT_EQ(q(4, -2, 1, 5).sign(), -1);
}

TEST(QuadFloor, Examples) {
  EXPECT_EQ(kGolden.floor(), 0);
  EXPECT_EQ(q(-2, 1, 1, 5).floor(), 0);
  EXPECT_EQ(q(4, -2, 1, 5).floor(), -1);
  EXPECT_EQ(QuadExact::rational(-7, 2).floor(), -4);
  EXPECT_EQ(QuadExact(-3).floor(), -3);
}

TEST(QuadFloor, MatchesLongDouble) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coef(-5000, 5000);
  std::uniform_int_distribution<long> den(1, 300);
  for (int i = 0; i < 2000; ++i) {
    const long a = coef(rng), b = coef(rng), c = den(rng);
    const QuadExact v = q(a, b, c, 7);
    const long double approx = (a + b * std::sqrt(7.0L)) / c;
    const long double fl = std::floor(approx);
    if (std::abs(approx - std::round(approx)) < 1e-12L) continue;
    EXPECT_EQ(v.floor(), BigInt(static_cast<long>(fl))) << v.to_string();
  }
}

TEST(OddDistance, Examples) {
  EXPECT_EQ(lsqmc::odd_distance(QuadExact(3)), QuadExact(0));
  EXPECT_EQ(lsqmc::odd_distance(QuadExact(0)), QuadExact(1));
  EXPECT_EQ(lsqmc::odd_distance(q(4, -2, 1, 5)), q(5, -2, 1, 5));
  EXPECT_EQ(lsqmc::odd_distance(QuadExact(-4)), QuadExact(1));
  EXPECT_EQ(lsqmc::odd_distance(QuadExact::rational(5, 2)), QuadExact::rational(1, 2));
}

TEST(OddDistance, Properties) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> coef(-400, 400);
  for (int i = 0; i < 500; ++i) {
    const QuadExact v = q(coef(rng), coef(rng), 1 + (coef(rng) & 63), 13);
    const QuadExact d = lsqmc::odd_distance(v);
    EXPECT_GE(d, QuadExact(0));
    EXPECT_LE(d, QuadExact(1));
    EXPECT_EQ(lsqmc::odd_distance(v + QuadExact(2 * (coef(rng) % 5))), d);
    const BigInt f = v.floor();
    for (long t = -3; t <= 3; ++t) {
      const BigInt cand = f + t;
      if (mpz_odd_p(cand.get_mpz_t()) == 0) continue;
      EXPECT_GE((v - QuadExact(cand)).abs(), d);
    }
  }
}

TEST(QuadToDouble, Examples) {
  EXPECT_EQ(kGolden.to_double(), 0.6180339887498949);
  EXPECT_EQ(QuadExact(1).to_double(), 1.0);
  EXPECT_EQ(q(-2, 1, 1, 5).to_double(), 0.2360679774997897);
  EXPECT_EQ(q(4, -2, 1, 5).to_double(), -0.4721359549995794);  // -0.47213595499957939282...
  EXPECT_EQ(QuadExact::rational(1, 3).to_double(), 1.0 / 3.0);
}

TEST(QuadToDouble, Overflow) {
  BigInt huge(1);
  mpz_mul_2exp(huge.get_mpz_t(), huge.get_mpz_t(), 2000);
  EXPECT_EQ(kind_of([&] { (void)QuadExact(huge).to_double(); }), ErrorKind::Overflow);
}

TEST(QuadToDouble, SignAgreesWithFloat) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coef(-100000, 100000);
  for (int i = 0; i < 5000; ++i) {
    const QuadExact v = q(coef(rng), coef(rng), 1 + (coef(rng) & 1023), 2);
    const double f = v.to_double();
    if (std::abs(f) > 1e-9) EXPECT_EQ(v.sign(), f > 0 ? 1 : -1);
  }
}

TEST(QuadSerialize, RoundTrip) {
  for (const QuadExact& v : {kGolden, q(4, -2, 1, 5), QuadExact(0), QuadExact::rational(-7, 3),
                             q(123456789, -987654321, 1000003, 6)}) {
    EXPECT_EQ(QuadExact::parse(v.to_string()), v) << v.to_string();
  }
  EXPECT_EQ(kGolden.to_string(), "(-1+1*sqrt(5))/2");
  EXPECT_EQ(QuadExact::parse(" ( 3 - 1*sqrt(5) ) / 2 "), q(3, -1, 2, 5));
  EXPECT_EQ(kind_of([] { (void)QuadExact::parse("1/2"); }), ErrorKind::ParseError);
}

TEST(QuadFieldLaws, RandomSharedRadicand) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> coef(-50, 50);
  const auto draw = [&] {
    QuadExact v;
    do {
      v = q(coef(rng), coef(rng), 1 + (coef(rng) & 31), 5);
    } while (v.is_zero());
    return v;
  };
  for (int i = 0; i < 300; ++i) {
    const QuadExact x = draw(), y = draw(), z = draw();
    EXPECT_EQ((x + y) + z, x + (y + z));
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x * (y + z), x * y + x * z);
    EXPECT_EQ(x * x.inverse(), QuadExact(1));
    EXPECT_EQ(x - x, QuadExact(0));
    EXPECT_EQ((x / y) * y, x);
  }
}

TEST(QuadOrder, Exact) {
  EXPECT_LT(q(-2, 1, 1, 5), kGolden);
  EXPECT_LT(kGolden, QuadExact(1));
  // Values that agree to ~1e-17 in binary64 still order correctly.
  const QuadExact a = q(0, 1, 1, 2);
  const QuadExact b = a + QuadExact::rational(1, BigInt("100000000000000000000"));
  EXPECT_LT(a, b);
  EXPECT_EQ(a.to_double(), b.to_double());
}

TEST(QuadHash, EqualValuesHashEqual) {
  lsqmc::QuadExactHash h;
  EXPECT_EQ(h(kGolden * kGolden), h(q(3, -1, 2, 5)));
}
