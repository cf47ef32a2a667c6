#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "linv/errors.hpp"

namespace linv {

using Int = mpz_class;
using Rat = mpq_class;

inline Int ipow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int ipow(long base, unsigned long e) { return ipow(Int(base), e); }

/// x mod m normalized to [0, m).
inline Int imod(const Int& x, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int igcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int ilcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Inverse of a modulo m; throws DomainError when gcd(a, m) != 1.
inline Int mod_inverse(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw DomainError("mod_inverse: not invertible");
  return r;
}

inline Int mod_pow(const Int& a, const Int& e, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// v_p(n) for n != 0.
inline long int_valuation(const Int& n, const Int& p) {
  if (n == 0) throw DomainError("int_valuation: zero");
  Int m;
  return static_cast<long>(
      mpz_remove(m.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

/// v_p(r) for r != 0; valuations of rationals may be negative.
inline long rat_valuation(const Rat& r, const Int& p) {
  if (r == 0) throw DomainError("rat_valuation: zero");
  return int_valuation(r.get_num(), p) - int_valuation(r.get_den(), p);
}

inline bool is_prime(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline long next_prime(long n) {
  Int r;
  mpz_nextprime(r.get_mpz_t(), Int(n).get_mpz_t());
  return r.get_si();
}

/// floor(log(n)/log(p)) for n >= 1, i.e. the largest e with p^e <= n.
inline long floor_log(long n, long p) {
  if (n < 1 || p < 2) throw DomainError("floor_log: bad arguments");
  long e = 0;
  Int pe = p;
  while (pe <= n) {
    ++e;
    pe *= p;
  }
  return e;
}

inline size_t bit_length(const Int& n) {
  return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline size_t bit_length(const Rat& q) {
  return bit_length(q.get_num()) + bit_length(q.get_den());
}

/// Kronecker symbol (a/n), defined for all integers.
inline int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline int kronecker(long a, long n) { return kronecker(Int(a), Int(n)); }

/// chi_D(n) for the quadratic character attached to a fundamental
/// discriminant D, extended to negative n via chi_D(-1) = sign(D).
inline int quad_char(const Int& D, const Int& n) {
  if (n >= 0) return kronecker(D, n);
  int s = (D > 0) ? 1 : -1;
  return s * kronecker(D, Int(-n));
}

inline bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  Int m = abs(n);
  for (Int d = 2; d * d <= m; ++d) {
    if (m % (d * d) == 0) return false;
    while (m % d == 0) m /= d;
  }
  return true;
}

/// D = 1 or a fundamental discriminant of a quadratic field.
inline bool is_fundamental_discriminant(const Int& D) {
  if (D == 1) return true;
  Int r = imod(D, 4);
  if (r == 1) return is_squarefree(D);
  if (r == 0) {
    Int m = D / 4;
    Int mr = imod(m, 4);
    return (mr == 2 || mr == 3) && is_squarefree(m);
  }
  return false;
}

/// Fundamental discriminants ordered by |D| ascending, positive before
/// negative on ties: 1, -3, -4, 5, -7, 8, -8, ...
inline std::vector<Int> fundamental_discriminants(long abs_bound) {
  std::vector<Int> out;
  for (long m = 1; m <= abs_bound; ++m) {
    if (is_fundamental_discriminant(Int(m))) out.emplace_back(m);
    if (is_fundamental_discriminant(Int(-m))) out.emplace_back(-m);
  }
  return out;
}

/// Canonical string form of a rational: "a" or "a/b" with b > 0.
inline std::string rat_to_string(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
  Rat r(s);
  r.canonicalize();
  return r;
}

}  // namespace linv
