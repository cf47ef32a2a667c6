#pragma once

#include <algorithm>
#include <vector>

#include "linv/errors.hpp"
#include "linv/fp_poly.hpp"
#include "linv/rational.hpp"

namespace linv {

using ZPoly = std::vector<Int>;  // dense, c[i] = coefficient of x^i
using QPoly = std::vector<Rat>;

inline void zp_trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline void qp_trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline long zp_degree(const ZPoly& f) { return static_cast<long>(f.size()) - 1; }
inline long qp_degree(const QPoly& f) { return static_cast<long>(f.size()) - 1; }

inline ZPoly zp_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly c(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  zp_trim(c);
  return c;
}

inline ZPoly zp_add(const ZPoly& a, const ZPoly& b) {
  ZPoly c(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.size()) c[i] += a[i];
    if (i < b.size()) c[i] += b[i];
  }
  zp_trim(c);
  return c;
}

inline ZPoly zp_sub(const ZPoly& a, const ZPoly& b) {
  ZPoly c(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.size()) c[i] += a[i];
    if (i < b.size()) c[i] -= b[i];
  }
  zp_trim(c);
  return c;
}

inline ZPoly zp_mod(const ZPoly& a, const Int& m) {
  ZPoly c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = imod(a[i], m);
  zp_trim(c);
  return c;
}

/// Coefficients reduced into the balanced range (-m/2, m/2].
inline ZPoly zp_balanced(const ZPoly& a, const Int& m) {
  ZPoly c(a.size());
  Int half = m / 2;
  for (size_t i = 0; i < a.size(); ++i) {
    c[i] = imod(a[i], m);
    if (c[i] > half) c[i] -= m;
  }
  zp_trim(c);
  return c;
}

/// Division with remainder modulo m by a monic divisor.
inline std::pair<ZPoly, ZPoly> zp_divmod_monic_mod(const ZPoly& a,
                                                   const ZPoly& b,
                                                   const Int& m) {
  if (b.empty() || imod(b.back(), m) != 1)
    throw DomainError("zp_divmod_monic_mod: divisor not monic");
  ZPoly r = zp_mod(a, m);
  long db = zp_degree(b);
  ZPoly q;
  if (zp_degree(r) >= db) q.assign(zp_degree(r) - db + 1, Int(0));
  while (zp_degree(r) >= db) {
    long d = zp_degree(r);
    Int t = r[d];
    q[d - db] = t;
    for (long j = 0; j <= db; ++j) r[d - db + j] = imod(r[d - db + j] - t * b[j], m);
    zp_trim(r);
  }
  zp_trim(q);
  return {q, r};
}

inline QPoly qp_from_z(const ZPoly& f) {
  QPoly g(f.size());
  for (size_t i = 0; i < f.size(); ++i) g[i] = Rat(f[i]);
  return g;
}

inline QPoly qp_add(const QPoly& a, const QPoly& b) {
  QPoly c(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.size()) c[i] += a[i];
    if (i < b.size()) c[i] += b[i];
  }
  qp_trim(c);
  return c;
}

inline QPoly qp_sub(const QPoly& a, const QPoly& b) {
  QPoly c(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.size()) c[i] += a[i];
    if (i < b.size()) c[i] -= b[i];
  }
  qp_trim(c);
  return c;
}

inline QPoly qp_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly c(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  qp_trim(c);
  return c;
}

inline QPoly qp_scale(const QPoly& a, const Rat& s) {
  QPoly c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] * s;
  qp_trim(c);
  return c;
}

inline std::pair<QPoly, QPoly> qp_divmod(const QPoly& a, const QPoly& b) {
  if (b.empty()) throw DomainError("qp_divmod: division by zero");
  QPoly r = a;
  qp_trim(r);
  long db = qp_degree(b);
  QPoly q;
  if (qp_degree(r) >= db) q.assign(qp_degree(r) - db + 1, Rat(0));
  while (qp_degree(r) >= db && !r.empty()) {
    long d = qp_degree(r);
    Rat t = r[d] / b[db];
    q[d - db] = t;
    for (long j = 0; j <= db; ++j) r[d - db + j] -= t * b[j];
    qp_trim(r);
  }
  qp_trim(q);
  return {q, r};
}

inline QPoly qp_monic(const QPoly& a) {
  if (a.empty()) return a;
  return qp_scale(a, Rat(1) / a.back());
}

inline QPoly qp_gcd(QPoly a, QPoly b) {
  qp_trim(a);
  qp_trim(b);
  while (!b.empty()) {
    QPoly r = qp_divmod(a, b).second;
    a = b;
    b = r;
  }
  return qp_monic(a);
}

inline QPoly qp_derivative(const QPoly& a) {
  if (a.size() <= 1) return {};
  QPoly c(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) c[i - 1] = a[i] * Rat(Int(i));
  return c;
}

template <typename T>
inline Rat qp_eval(const QPoly& a, const T& x) {
  Rat acc = 0;
  for (size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
  return acc;
}

inline bool qp_is_integral(const QPoly& a) {
  for (const auto& c : a)
    if (c.get_den() != 1) return false;
  return true;
}

inline ZPoly zp_from_q(const QPoly& a) {
  if (!qp_is_integral(a)) throw DomainError("zp_from_q: non-integral");
  ZPoly f(a.size());
  for (size_t i = 0; i < a.size(); ++i) f[i] = a[i].get_num();
  return f;
}

/// f(x + c) by repeated synthetic division.
inline ZPoly zp_shift(const ZPoly& f, const Int& c) {
  ZPoly g = f;
  for (size_t i = 0; i < f.size(); ++i) {
    // after i passes, g holds the Taylor coefficients at c up to index i-1
    for (size_t j = f.size() - 1; j >= i + 1; --j) g[j - 1] += c * g[j];
    if (i + 1 >= f.size()) break;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Hensel lifting (von zur Gathen & Gerhard, Alg. 15.10), all factors monic.
// ---------------------------------------------------------------------------

/// One quadratic lifting step: given f = g*h (mod m) with g, h, f monic and
/// s*g + t*h = 1 (mod m), produce the same data modulo m^2.
inline void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t,
                        const Int& m) {
  Int m2 = m * m;
  ZPoly e = zp_mod(zp_sub(f, zp_mul(g, h)), m2);
  auto [q, r] = zp_divmod_monic_mod(zp_mul(s, e), h, m2);
  ZPoly g1 = zp_mod(zp_add(zp_add(g, zp_mul(t, e)), zp_mul(q, g)), m2);
  ZPoly h1 = zp_mod(zp_add(h, r), m2);
  ZPoly b = zp_mod(zp_sub(zp_add(zp_mul(s, g1), zp_mul(t, h1)), ZPoly{Int(1)}), m2);
  auto [c, d] = zp_divmod_monic_mod(zp_mul(s, b), h1, m2);
  ZPoly s1 = zp_mod(zp_sub(s, d), m2);
  ZPoly t1 = zp_mod(zp_sub(zp_sub(t, zp_mul(t, b)), zp_mul(c, g1)), m2);
  g = g1;
  h = h1;
  s = s1;
  t = t1;
}

/// Lift a factorization f = prod(factors) (mod p), pairwise coprime mod p and
/// all monic, to a factorization mod p^target_exp (f monic over Z).
inline std::vector<ZPoly> hensel_lift(const ZPoly& f,
                                      std::vector<FpPoly> factors, long p,
                                      long target_exp) {
  if (factors.size() == 1) {
    Int m = ipow(p, static_cast<unsigned long>(target_exp));
    return {zp_mod(f, m)};
  }
  // split factors into two halves
  size_t half = factors.size() / 2;
  FpPoly gp = FpPoly::one(p), hp = FpPoly::one(p);
  std::vector<FpPoly> left(factors.begin(), factors.begin() + half);
  std::vector<FpPoly> right(factors.begin() + half, factors.end());
  for (const auto& q : left) gp = fp_mul(gp, q);
  for (const auto& q : right) hp = fp_mul(hp, q);
  auto [one, sp, tp] = fp_ext_gcd(gp, hp);
  if (one.degree() != 0)
    throw ComputationError("hensel_lift: factors not coprime mod p");

  auto to_z = [](const FpPoly& a) {
    ZPoly f2(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) f2[i] = a.c[i];
    return f2;
  };
  ZPoly g = to_z(gp), h = to_z(hp), s = to_z(sp), t = to_z(tp);
  Int m(p);
  long exp = 1;
  while (exp < target_exp) {
    hensel_step(f, g, h, s, t, m);
    m = m * m;
    exp *= 2;
  }
  Int target = ipow(p, static_cast<unsigned long>(target_exp));
  g = zp_mod(g, target);
  h = zp_mod(h, target);
  auto lifted_left = hensel_lift(g, left, p, target_exp);
  auto lifted_right = hensel_lift(h, right, p, target_exp);
  lifted_left.insert(lifted_left.end(), lifted_right.begin(),
                     lifted_right.end());
  return lifted_left;
}

// ---------------------------------------------------------------------------
// Factorization over Q (Zassenhaus).
// ---------------------------------------------------------------------------

namespace detail {

/// Factor a monic squarefree integer polynomial into monic irreducibles.
inline std::vector<ZPoly> factor_squarefree_monic_z(const ZPoly& f) {
  long n = zp_degree(f);
  if (n <= 0) return {};
  if (n == 1) return {f};

  // choose an odd prime with squarefree reduction and few modular factors
  long best_p = 0;
  std::vector<std::pair<FpPoly, long>> best_fac;
  long tried = 0;
  for (long p = 3; tried < 7; p = next_prime(p)) {
    FpPoly fp = fp_from_int_poly(f, p);
    if (fp.degree() != n) continue;  // leading coeff vanished (cannot: monic)
    if (!fp_is_squarefree(fp)) continue;
    ++tried;
    auto fac = fp_factor(fp);
    if (best_p == 0 || fac.size() < best_fac.size()) {
      best_p = p;
      best_fac = fac;
      if (fac.size() == 1) break;
    }
  }
  if (best_p == 0) throw ComputationError("factor: no good prime found");
  if (best_fac.size() == 1) return {f};

  // Landau-Mignotte style bound on factor coefficients: for monic g | f,
  // |coeff(g)| <= 2^n * (sum |c_i|); lift modulus must exceed twice that.
  Int height = 0;
  for (const auto& c : f) height += abs(c);
  Int bound = (ipow(2, static_cast<unsigned long>(n + 1))) * height;
  long exp = 1;
  Int pm(best_p);
  while (pm <= 2 * bound) {
    pm *= best_p;
    ++exp;
  }

  std::vector<FpPoly> modular;
  for (auto& [q, m] : best_fac) modular.push_back(q);
  std::vector<ZPoly> lifted = hensel_lift(f, modular, best_p, exp);
  Int modulus = ipow(best_p, static_cast<unsigned long>(exp));

  // subset recombination
  std::vector<ZPoly> result;
  ZPoly remaining = f;
  std::vector<ZPoly> pool = lifted;
  size_t take = 1;
  while (2 * take <= pool.size()) {
    bool found = false;
    std::vector<size_t> idx(take);
    for (size_t i = 0; i < take; ++i) idx[i] = i;
    while (true) {
      ZPoly cand{Int(1)};
      for (size_t i : idx) cand = zp_mod(zp_mul(cand, pool[i]), modulus);
      cand = zp_balanced(cand, modulus);
      // trial division over Z
      QPoly quo, rem;
      std::tie(quo, rem) = qp_divmod(qp_from_z(remaining), qp_from_z(cand));
      if (rem.empty() && qp_is_integral(quo)) {
        result.push_back(cand);
        remaining = zp_from_q(quo);
        std::vector<ZPoly> next_pool;
        for (size_t i = 0; i < pool.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end())
            next_pool.push_back(pool[i]);
        pool = next_pool;
        found = true;
        break;
      }
      // next combination
      long pos = static_cast<long>(take) - 1;
      while (pos >= 0 && idx[pos] == pool.size() - take + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (size_t i = pos + 1; i < take; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found) ++take;
  }
  if (zp_degree(remaining) > 0) result.push_back(remaining);
  std::sort(result.begin(), result.end(), [](const ZPoly& a, const ZPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  return result;
}

}  // namespace detail

/// Factor a monic rational polynomial into (monic irreducible, multiplicity),
/// deterministic order.
inline std::vector<std::pair<QPoly, long>> qp_factor_monic(const QPoly& input) {
  QPoly f = input;
  qp_trim(f);
  if (f.empty()) throw DomainError("qp_factor_monic: zero polynomial");
  if (f.back() != 1) throw DomainError("qp_factor_monic: not monic");
  std::vector<std::pair<QPoly, long>> out;
  if (qp_degree(f) == 0) return out;

  // substitution x = y/c makes the polynomial monic integral
  Int c = 1;
  for (const auto& a : f) c = ilcm(c, a.get_den());
  long n = qp_degree(f);
  ZPoly F(n + 1);
  Int cpow = 1;
  for (long i = n; i >= 0; --i) {
    Rat v = f[i] * Rat(cpow);
    if (v.get_den() != 1)
      cpow = cpow;  // unreachable; lcm choice guarantees integrality
    F[i] = v.get_num();
    cpow *= c;
  }

  // squarefree decomposition over Q (characteristic zero)
  QPoly g = qp_from_z(F);
  long mult = 1;
  while (qp_degree(g) > 0) {
    QPoly d = qp_derivative(g);
    QPoly w = qp_gcd(g, d);
    QPoly sf = qp_divmod(g, w).first;  // product of factors of mult >= mult
    // factors in sf but not in w/gcd(sf,w) have exact multiplicity == mult
    QPoly next = w;
    QPoly exact = qp_divmod(sf, qp_gcd(sf, next)).first;
    if (qp_degree(exact) > 0) {
      ZPoly E = zp_from_q(qp_monic(exact));
      for (const auto& irr : detail::factor_squarefree_monic_z(E)) {
        // undo the substitution: factor(y) -> monic factor of f in x
        long m = zp_degree(irr);
        QPoly back(m + 1);
        Int cp = 1;
        for (long i = m; i >= 0; --i) {
          back[i] = Rat(irr[i]) / Rat(cp);
          cp *= c;
        }
        back = qp_monic(back);
        out.emplace_back(back, mult);
      }
    }
    g = next;
    ++mult;
  }
  std::sort(out.begin(), out.end(), [](const auto& A, const auto& B) {
    if (A.first.size() != B.first.size()) return A.first.size() < B.first.size();
    for (size_t i = A.first.size(); i-- > 0;)
      if (A.first[i] != B.first[i]) return A.first[i] < B.first[i];
    return false;
  });
  return out;
}

inline bool qp_is_irreducible(const QPoly& f) {
  auto fac = qp_factor_monic(qp_monic(f));
  return fac.size() == 1 && fac[0].second == 1 &&
         qp_degree(fac[0].first) == qp_degree(f);
}

}  // namespace linv
