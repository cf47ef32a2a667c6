#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "linv/padic.hpp"

using namespace linv;

namespace {

// Independent oracle: omega(a) mod p^M as the limit of a -> a^p.
Int teich_oracle(long a, long p, long M) {
  Int mod = ipow(p, (unsigned long)M);
  Int x = imod(Int(a), mod);
  for (long i = 0; i <= M; ++i) x = mod_pow(x, Int(p), mod);
  return x;
}

// Independent oracle: log of a one-unit u by the raw series sum_{j>=1}
// (-1)^(j-1) (u-1)^j / j, evaluated with exact rationals then reduced.
Int log_series_oracle(const Int& u, long p, long M) {
  Int mod = ipow(p, (unsigned long)M);
  Rat acc = 0;
  Rat z(imod(u - 1, mod));
  Rat zpow = 1;
  for (long j = 1; j <= 4 * M + 8; ++j) {
    zpow *= z;
    Rat term = zpow / j;
    acc += (j % 2 == 1) ? term : -term;
  }
  // acc = log u + O(p^M) provided enough terms were taken; reduce mod p^M.
  Int den = acc.get_den();
  Int num = acc.get_num();
  return imod(num * mod_inverse(imod(den, mod), mod), mod);
}

}  // namespace

TEST_CASE("teichmuller fixed point and spec values") {
  // omega(1) = 1 for any precision.
  auto w1 = teichmuller(1, 5, 10);
  REQUIRE(w1.valuation() == 0);
  REQUIRE(w1.unit_part() == 1);

  // omega(2) mod 25 = 7, via the iteration oracle.
  auto w2 = teichmuller(2, 5, 2);
  REQUIRE(w2.unit_part() == 7);
  REQUIRE(w2.unit_part() == teich_oracle(2, 5, 2));

  // p = 2 convention: 3 = -1 mod 4, so omega(3) = -1 = 15 mod 16.
  auto w3 = teichmuller(3, 2, 4);
  REQUIRE(w3.unit_part() == 15);

  REQUIRE_THROWS_AS(teichmuller(10, 5, 3), DomainError);
}

TEST_CASE("teichmuller properties over random units") {
  std::mt19937_64 rng(20240811);
  for (long p : {3L, 5L, 7L, 11L}) {
    long M = 8;
    Int pM = ipow(p, (unsigned long)M);
    for (int trial = 0; trial < 1000; ++trial) {
      Int a = imod(Int((long)(rng() % 1000000007ULL)), pM);
      if (a % p == 0) continue;
      auto w = teichmuller(a, p, M);
      // omega(a)^(p-1) = 1 mod p^M
      REQUIRE(mod_pow(w.unit_part(), Int(p - 1), pM) == 1);
      // omega(a) = a mod p
      REQUIRE(imod(w.unit_part(), Int(p)) == imod(a, Int(p)));
    }
  }
}

TEST_CASE("log_angle spec values") {
  // log 1 = certified zero
  auto z = log_angle(1, 5, 6);
  REQUIRE(z.is_zero());
  REQUIRE(z.abs_precision() == 6);

  // log<6> = 5 mod 25 (series oracle: 6 is a one-unit, omega(6) = 1)
  auto l6 = log_angle(6, 5, 2);
  REQUIRE(!l6.is_zero());
  REQUIRE(l6.lift() == 5);
  REQUIRE(imod(log_series_oracle(6, 5, 4), Int(25)) == 5);

  // valuation >= 1 for odd p
  REQUIRE(l6.valuation() >= 1);
}

TEST_CASE("log_angle additivity") {
  // log<7> + log<2> = log<14> mod 25
  auto a = log_angle(7, 5, 2) + log_angle(2, 5, 2);
  auto b = log_angle(14, 5, 2);
  REQUIRE(a.agrees_with(b));

  std::mt19937_64 rng(7);
  for (long p : {3L, 5L, 7L, 11L}) {
    long M = 7;
    Int pM = ipow(p, (unsigned long)M);
    for (int trial = 0; trial < 60; ++trial) {
      Int x = imod(Int((long)(rng() % 1000003ULL)) + 1, pM);
      Int y = imod(Int((long)(rng() % 999983ULL)) + 1, pM);
      if (x % p == 0 || y % p == 0) continue;
      auto lhs = log_angle(x, p, M) + log_angle(y, p, M);
      auto rhs = log_angle(imod(x * y, pM), p, M);
      REQUIRE(lhs.agrees_with(rhs));
    }
  }
  // p = 2: <x> in 1 + 4 Z_2, log valuation >= 2
  auto l2 = log_angle(7, 2, 8);
  REQUIRE(l2.valuation() >= 2);
  auto lhs2 = log_angle(7, 2, 8) + log_angle(9, 2, 8);
  REQUIRE(lhs2.agrees_with(log_angle(63, 2, 8)));
}

TEST_CASE("precision propagation") {
  std::mt19937_64 rng(99);
  long p = 7;
  for (int trial = 0; trial < 200; ++trial) {
    long Ma = 3 + (long)(rng() % 6), Mb = 3 + (long)(rng() % 6);
    Rat ra(Int((long)(rng() % 2000) - 1000), Int(1 + (long)(rng() % 50)));
    Rat rb(Int((long)(rng() % 2000) - 1000), Int(1 + (long)(rng() % 50)));
    if (ra == 0 || rb == 0) continue;
    ra.canonicalize();
    rb.canonicalize();
    auto a = PadicElement::from_rational(ra, p, Ma);
    auto b = PadicElement::from_rational(rb, p, Mb);
    if (a.is_zero() || b.is_zero()) continue;

    auto s = a + b;
    REQUIRE(s.abs_precision() == std::min(Ma, Mb));
    auto m = a * b;
    REQUIRE(m.abs_precision() ==
            std::min(a.valuation() + Mb, b.valuation() + Ma));
    // division precision mirrors multiplication (min relative precision)
    auto d = a / b;
    REQUIRE(d.abs_precision() - (a.valuation() - b.valuation()) ==
            std::min(a.rel_precision(), b.rel_precision()));
  }
}

TEST_CASE("subtraction of equal values certifies zero") {
  long p = 5;
  auto a = PadicElement::from_rational(Rat(123, 7), p, 8);
  auto b = PadicElement::from_rational(Rat(123, 7), p, 6);
  auto d = a - b;
  REQUIRE(d.is_zero());
  REQUIRE(d.abs_precision() == 6);

  // near-equal values: difference has the correct positive valuation,
  // never a fabricated digit beyond stated precision
  auto c = PadicElement::from_rational(Rat(123 + 3125, 7), p, 6);
  auto e = a - c;
  REQUIRE(!e.is_zero());
  REQUIRE(e.valuation() == 5);
}

TEST_CASE("exact j-invariant style arithmetic sanity") {
  // v_p and shift behave as claimed
  auto x = PadicElement::from_rational(Rat(50), 5, 8);
  REQUIRE(x.valuation() == 2);
  REQUIRE(x.shift(3).valuation() == 5);
  REQUIRE(x.shift(3).abs_precision() == 11);
  auto inv = PadicElement::from_int(1, 5, 8) / x;
  REQUIRE(inv.valuation() == -2);
}
