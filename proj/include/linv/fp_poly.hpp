#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "linv/errors.hpp"
#include "linv/rational.hpp"

namespace linv {

/// Dense polynomial over F_p, least-significant coefficient first.
/// p must fit comfortably in a machine word (products use 64-bit math).
struct FpPoly {
  long p = 0;
  std::vector<long> c;

  FpPoly() = default;
  FpPoly(long p_, std::vector<long> c_) : p(p_), c(std::move(c_)) { trim(); }

  static FpPoly zero(long p) { return FpPoly(p, {}); }
  static FpPoly one(long p) { return FpPoly(p, {1}); }
  static FpPoly x(long p) { return FpPoly(p, {0, 1}); }
  static FpPoly constant(long p, long a) { return FpPoly(p, {((a % p) + p) % p}); }

  void trim() {
    while (!c.empty() && c.back() % p == 0) c.pop_back();
    for (auto& v : c) v = ((v % p) + p) % p;
  }
  bool is_zero() const { return c.empty(); }
  long degree() const { return static_cast<long>(c.size()) - 1; }
  long lead() const { return c.back(); }
  long coeff(long i) const {
    return (i >= 0 && i < static_cast<long>(c.size())) ? c[i] : 0;
  }
  bool operator==(const FpPoly& o) const { return p == o.p && c == o.c; }
  bool operator<(const FpPoly& o) const {
    if (c.size() != o.c.size()) return c.size() < o.c.size();
    for (size_t i = c.size(); i-- > 0;)
      if (c[i] != o.c[i]) return c[i] < o.c[i];
    return false;
  }
};

inline FpPoly fp_from_int_poly(const std::vector<Int>& f, long p) {
  std::vector<long> c(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    Int r = imod(f[i], Int(p));
    c[i] = r.get_si();
  }
  return FpPoly(p, std::move(c));
}

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b) {
  std::vector<long> c(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = (a.coeff(i) + b.coeff(i)) % a.p;
  return FpPoly(a.p, std::move(c));
}

inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b) {
  std::vector<long> c(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = ((a.coeff(i) - b.coeff(i)) % a.p + a.p) % a.p;
  return FpPoly(a.p, std::move(c));
}

inline FpPoly fp_scale(const FpPoly& a, long s) {
  s = ((s % a.p) + a.p) % a.p;
  std::vector<long> c(a.c.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = (a.c[i] * s) % a.p;
  return FpPoly(a.p, std::move(c));
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly::zero(a.p);
  std::vector<long> c(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      c[i + j] = (c[i + j] + a.c[i] * b.c[j]) % a.p;
  }
  return FpPoly(a.p, std::move(c));
}

inline long fp_inv_scalar(long a, long p) {
  return mod_inverse(Int(((a % p) + p) % p), Int(p)).get_si();
}

/// Division with remainder; b != 0.
inline std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw DomainError("fp_divmod: division by zero");
  long p = a.p;
  std::vector<long> r = a.c;
  long db = b.degree();
  long binv = fp_inv_scalar(b.lead(), p);
  std::vector<long> q(std::max<long>(0, a.degree() - db + 1), 0);
  for (long i = a.degree(); i >= db; --i) {
    if (r.size() <= static_cast<size_t>(i)) continue;
    long t = (r[i] * binv) % p;
    if (t == 0) continue;
    q[i - db] = t;
    for (long j = 0; j <= db; ++j) {
      long idx = i - db + j;
      r[idx] = ((r[idx] - t * b.c[j]) % p + p) % p;
    }
  }
  return {FpPoly(p, std::move(q)), FpPoly(p, std::move(r))};
}

inline FpPoly fp_rem(const FpPoly& a, const FpPoly& b) {
  return fp_divmod(a, b).second;
}

inline FpPoly fp_monic(const FpPoly& a) {
  if (a.is_zero()) return a;
  return fp_scale(a, fp_inv_scalar(a.lead(), a.p));
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = fp_rem(a, b);
    a = b;
    b = r;
  }
  return fp_monic(a);
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
inline std::tuple<FpPoly, FpPoly, FpPoly> fp_ext_gcd(const FpPoly& a,
                                                     const FpPoly& b) {
  long p = a.p;
  FpPoly r0 = a, r1 = b;
  FpPoly s0 = FpPoly::one(p), s1 = FpPoly::zero(p);
  FpPoly t0 = FpPoly::zero(p), t1 = FpPoly::one(p);
  while (!r1.is_zero()) {
    auto [q, r2] = fp_divmod(r0, r1);
    r0 = r1;
    r1 = r2;
    FpPoly s2 = fp_sub(s0, fp_mul(q, s1));
    s0 = s1;
    s1 = s2;
    FpPoly t2 = fp_sub(t0, fp_mul(q, t1));
    t0 = t1;
    t1 = t2;
  }
  if (r0.is_zero()) return {r0, s0, t0};
  long inv = fp_inv_scalar(r0.lead(), p);
  return {fp_scale(r0, inv), fp_scale(s0, inv), fp_scale(t0, inv)};
}

inline FpPoly fp_derivative(const FpPoly& a) {
  if (a.c.size() <= 1) return FpPoly::zero(a.p);
  std::vector<long> c(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i)
    c[i - 1] = (a.c[i] * static_cast<long>(i % a.p)) % a.p;
  return FpPoly(a.p, std::move(c));
}

inline FpPoly fp_powmod(FpPoly base, Int e, const FpPoly& mod) {
  FpPoly acc = FpPoly::one(base.p);
  base = fp_rem(base, mod);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = fp_rem(fp_mul(acc, base), mod);
    base = fp_rem(fp_mul(base, base), mod);
    e >>= 1;
  }
  return acc;
}

inline long fp_eval(const FpPoly& a, long x) {
  long acc = 0;
  x = ((x % a.p) + a.p) % a.p;
  for (size_t i = a.c.size(); i-- > 0;) acc = (acc * x + a.c[i]) % a.p;
  return acc;
}

inline bool fp_is_squarefree(const FpPoly& a) {
  FpPoly d = fp_derivative(a);
  if (d.is_zero()) return a.degree() <= 0;
  return fp_gcd(a, d).degree() == 0;
}

namespace detail {

inline uint64_t fp_hash(const FpPoly& f) {
  uint64_t h = 1469598103934665603ULL ^ static_cast<uint64_t>(f.p);
  for (long v : f.c) {
    h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Cantor-Zassenhaus equal-degree splitting for odd p; f squarefree monic,
/// a product of irreducibles all of degree d. Deterministically seeded.
inline void fp_equal_degree(const FpPoly& f, long d,
                            std::vector<FpPoly>& out, std::mt19937_64& rng) {
  if (f.degree() == d) {
    out.push_back(fp_monic(f));
    return;
  }
  long p = f.p;
  Int exponent = (ipow(p, static_cast<unsigned long>(d)) - 1) / 2;
  while (true) {
    std::vector<long> rc(f.degree(), 0);
    for (auto& v : rc) v = static_cast<long>(rng() % static_cast<uint64_t>(p));
    FpPoly a(p, std::move(rc));
    if (a.degree() < 1) continue;
    FpPoly g = fp_gcd(f, a);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      fp_equal_degree(g, d, out, rng);
      fp_equal_degree(fp_divmod(f, g).first, d, out, rng);
      return;
    }
    FpPoly b = fp_powmod(a, exponent, f);
    b = fp_sub(b, FpPoly::one(p));
    g = fp_gcd(f, b);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      fp_equal_degree(g, d, out, rng);
      fp_equal_degree(fp_divmod(f, g).first, d, out, rng);
      return;
    }
  }
}

}  // namespace detail

/// Full factorization over F_p (p odd) as (irreducible monic, multiplicity)
/// pairs, deterministic order (by degree then lexicographic).
inline std::vector<std::pair<FpPoly, long>> fp_factor(const FpPoly& input) {
  long p = input.p;
  if (p == 2)
    throw DomainError("fp_factor: p = 2 not supported");
  if (input.is_zero()) throw DomainError("fp_factor: zero polynomial");
  std::vector<std::pair<FpPoly, long>> result;
  FpPoly f = fp_monic(input);
  if (f.degree() <= 0) return result;

  // Squarefree decomposition in characteristic p: strip repeated factors via
  // gcd with the derivative; a vanishing derivative means f = g(x^p) = g(x)^p.
  std::function<void(FpPoly, long)> sqfree = [&](FpPoly g, long mult) {
    if (g.degree() <= 0) return;
    FpPoly d = fp_derivative(g);
    if (d.is_zero()) {
      // g(x) = h(x^p); in F_p[x], h(x^p) = h(x)^p.
      std::vector<long> hc;
      for (long i = 0; i <= g.degree(); i += p) hc.push_back(g.coeff(i));
      sqfree(FpPoly(p, std::move(hc)), mult * p);
      return;
    }
    FpPoly w = fp_gcd(g, d);
    FpPoly sf = fp_divmod(g, w).first;  // squarefree part
    // Distinct-degree then equal-degree split of the squarefree part.
    FpPoly rem = sf;
    FpPoly h = FpPoly::x(p);
    long dd = 0;
    std::vector<FpPoly> irr;
    while (rem.degree() > 0) {
      ++dd;
      if (2 * dd > rem.degree()) {
        irr.push_back(fp_monic(rem));
        break;
      }
      h = fp_powmod(h, Int(p), rem);
      FpPoly g2 = fp_gcd(rem, fp_sub(h, FpPoly::x(p)));
      if (g2.degree() > 0) {
        std::mt19937_64 rng(detail::fp_hash(g2) ^ 0xabcdef12u);
        detail::fp_equal_degree(g2, dd, irr, rng);
        rem = fp_divmod(rem, g2).first;
        h = fp_rem(h, rem);
      }
    }
    FpPoly cofactor = g;
    for (const auto& q : irr) {
      // multiplicity of q in g
      long m = 0;
      while (true) {
        auto [quo, r] = fp_divmod(cofactor, q);
        if (!r.is_zero()) break;
        cofactor = quo;
        ++m;
      }
      result.emplace_back(q, m * mult);
    }
    // Factors whose multiplicity is divisible by p are invisible in the
    // squarefree part; they remain in the cofactor, a perfect p-th power.
    sqfree(cofactor, mult);
  };
  sqfree(f, 1);
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return result;
}

inline bool fp_is_irreducible(const FpPoly& f) {
  if (f.degree() <= 0) return false;
  if (f.degree() == 1) return true;
  auto fac = fp_factor(f);
  return fac.size() == 1 && fac[0].second == 1;
}

/// Roots in F_p of f, deterministic ascending order.
inline std::vector<long> fp_roots(const FpPoly& f) {
  std::vector<long> roots;
  for (auto& [q, m] : fp_factor(f))
    if (q.degree() == 1) roots.push_back(((f.p - q.coeff(0)) % f.p + f.p) % f.p);
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Arithmetic in F_q = F_p[t]/(modulus), elements as reduced FpPoly.
class FqField {
 public:
  FqField(FpPoly modulus) : m_(std::move(modulus)) {
    if (!fp_is_irreducible(m_))
      throw DomainError("FqField: modulus not irreducible");
  }

  long p() const { return m_.p; }
  long degree() const { return m_.degree(); }
  const FpPoly& modulus() const { return m_; }
  Int order() const { return ipow(p(), static_cast<unsigned long>(degree())); }

  FpPoly reduce(const FpPoly& a) const { return fp_rem(a, m_); }
  FpPoly add(const FpPoly& a, const FpPoly& b) const { return fp_add(a, b); }
  FpPoly mul(const FpPoly& a, const FpPoly& b) const {
    return fp_rem(fp_mul(a, b), m_);
  }
  FpPoly scalar_mul(long s, const FpPoly& a) const { return fp_scale(a, s); }
  FpPoly pow(const FpPoly& a, const Int& e) const { return fp_powmod(a, e, m_); }
  FpPoly frobenius(const FpPoly& a) const { return pow(a, Int(p())); }

  /// Evaluate a polynomial with F_p coefficients at an F_q element.
  FpPoly eval(const FpPoly& poly, const FpPoly& at) const {
    FpPoly acc = FpPoly::zero(p());
    for (size_t i = poly.c.size(); i-- > 0;) {
      acc = mul(acc, at);
      acc = fp_add(acc, FpPoly::constant(p(), poly.c[i]));
    }
    return acc;
  }

  /// All roots of an F_p polynomial in this field, by exhaustive scan
  /// (fields used here are tiny); throws when the field is too large.
  std::vector<FpPoly> roots_of(const FpPoly& poly) const {
    if (order() > 200000)
      throw ComputationError("FqField::roots_of: field too large for scan");
    std::vector<FpPoly> out;
    long q = order().get_si();
    for (long idx = 0; idx < q; ++idx) {
      long v = idx;
      std::vector<long> digits;
      for (long i = 0; i < degree(); ++i) {
        digits.push_back(v % p());
        v /= p();
      }
      FpPoly cand(p(), std::move(digits));
      if (eval(poly, cand).is_zero()) out.push_back(cand);
    }
    return out;
  }

 private:
  FpPoly m_;
};

/// Deterministic standard model of F_{p^f}: the lexicographically least
/// monic irreducible of degree f.
inline FpPoly standard_irreducible(long p, long f) {
  if (f == 1) return FpPoly::x(p);
  Int total = ipow(p, static_cast<unsigned long>(f));
  if (total > 5000000)
    throw ComputationError("standard_irreducible: degree too large");
  long count = total.get_si();
  for (long v = 0; v < count; ++v) {
    long t = v;
    std::vector<long> c(f + 1, 0);
    for (long i = 0; i < f; ++i) {
      c[i] = t % p;
      t /= p;
    }
    c[f] = 1;
    FpPoly cand(p, std::move(c));
    if (fp_is_irreducible(cand)) return cand;
  }
  throw ComputationError("standard_irreducible: none found");
}

}  // namespace linv
