#pragma once

#include <string>
#include <utility>

#include "linv/errors.hpp"
#include "linv/rational.hpp"

namespace linv {

/// Element of Q_p known to a finite absolute precision: either a certified
/// zero O(p^M), or u * p^v with u a unit stored modulo p^(M-v). All analytic
/// quantities downstream flow through this type, so arithmetic never reports
/// more precision than the operands justify: absolute precision is min-ruled
/// under addition, relative precision is min-ruled under multiplication and
/// division, and cancellation yields a certified zero rather than digits.
class PadicElement {
 public:
  PadicElement() : p_(0), val_(0), absprec_(0), zero_(true) {}

  /// Certified zero at absolute precision M: the value is O(p^M).
  static PadicElement zero(long p, long abs_prec) {
    PadicElement e;
    e.p_ = p;
    e.absprec_ = abs_prec;
    e.zero_ = true;
    return e;
  }

  static PadicElement from_int(const Int& n, long p, long abs_prec) {
    return from_rational(Rat(n), p, abs_prec);
  }

  static PadicElement from_rational(const Rat& r, long p, long abs_prec) {
    if (r == 0) return zero(p, abs_prec);
    long v = rat_valuation(r, p);
    if (v >= abs_prec) return zero(p, abs_prec);
    Int pv = ipow(p, static_cast<unsigned long>(v >= 0 ? v : -v));
    Int num = r.get_num(), den = r.get_den();
    if (v > 0)
      num /= pv;
    else if (v < 0)
      den /= pv;
    Int mod = ipow(p, static_cast<unsigned long>(abs_prec - v));
    Int u = imod(num * mod_inverse(imod(den, mod), mod), mod);
    return PadicElement(p, v, u, abs_prec);
  }

  /// Raw constructor; unit must be prime to p (reduced mod p^(abs_prec-val)).
  PadicElement(long p, long val, Int unit, long abs_prec)
      : p_(p), val_(val), unit_(std::move(unit)), absprec_(abs_prec),
        zero_(false) {
    if (val_ >= absprec_)
      throw ComputationError("PadicElement: valuation >= abs precision");
    Int mod = ipow(p_, static_cast<unsigned long>(absprec_ - val_));
    unit_ = imod(unit_, mod);
    if (unit_ % p_ == 0)
      throw ComputationError("PadicElement: unit part divisible by p");
  }

  long prime() const { return p_; }
  bool is_zero() const { return zero_; }
  long abs_precision() const { return absprec_; }
  long rel_precision() const { return zero_ ? 0 : absprec_ - val_; }

  long valuation() const {
    if (zero_) throw PrecisionError("valuation of certified zero");
    return val_;
  }

  /// The unit cofactor modulo p^(abs_precision - valuation).
  const Int& unit_part() const {
    if (zero_) throw PrecisionError("unit part of certified zero");
    return unit_;
  }

  /// Integer representative u*p^v (valid when valuation >= 0).
  Int lift() const {
    if (zero_) return 0;
    if (val_ < 0) throw DomainError("lift: negative valuation");
    return unit_ * ipow(p_, static_cast<unsigned long>(val_));
  }

  /// Reduce the stated absolute precision (never increases it).
  PadicElement cap_abs_prec(long m) const {
    if (m >= absprec_) return *this;
    if (zero_ || val_ >= m) return zero(p_, m);
    Int mod = ipow(p_, static_cast<unsigned long>(m - val_));
    return PadicElement(p_, val_, imod(unit_, mod), m);
  }

  PadicElement operator-() const {
    if (zero_) return *this;
    Int mod = ipow(p_, static_cast<unsigned long>(absprec_ - val_));
    return PadicElement(p_, val_, mod - unit_, absprec_);
  }

  friend PadicElement operator+(const PadicElement& a, const PadicElement& b) {
    a.check_same(b);
    if (a.zero_ && b.zero_)
      return zero(a.p_, std::min(a.absprec_, b.absprec_));
    if (a.zero_) return b.cap_abs_prec(std::min(a.absprec_, b.absprec_));
    if (b.zero_) return a.cap_abs_prec(std::min(a.absprec_, b.absprec_));
    long m = std::min(a.absprec_, b.absprec_);
    long v0 = std::min(a.val_, b.val_);
    if (v0 >= m) return zero(a.p_, m);
    Int mod = ipow(a.p_, static_cast<unsigned long>(m - v0));
    Int x = imod(a.unit_ * ipow(a.p_, static_cast<unsigned long>(a.val_ - v0)) +
                     b.unit_ * ipow(a.p_, static_cast<unsigned long>(b.val_ - v0)),
                 mod);
    if (x == 0) return zero(a.p_, m);
    long dv = int_valuation(x, a.p_);
    long v = v0 + dv;
    if (v >= m) return zero(a.p_, m);
    return PadicElement(a.p_, v, x / ipow(a.p_, static_cast<unsigned long>(dv)),
                        m);
  }

  friend PadicElement operator-(const PadicElement& a, const PadicElement& b) {
    return a + (-b);
  }

  friend PadicElement operator*(const PadicElement& a, const PadicElement& b) {
    a.check_same(b);
    if (a.zero_ || b.zero_) {
      // O(p^Ma) * (unit p^vb + O(p^Mb)) = O(p^(Ma+vb)); zero*zero: O(p^(Ma+Mb)).
      long m;
      if (a.zero_ && b.zero_)
        m = a.absprec_ + b.absprec_;
      else if (a.zero_)
        m = a.absprec_ + b.val_;
      else
        m = b.absprec_ + a.val_;
      return zero(a.p_, m);
    }
    long rel = std::min(a.rel_precision(), b.rel_precision());
    long v = a.val_ + b.val_;
    Int mod = ipow(a.p_, static_cast<unsigned long>(rel));
    return PadicElement(a.p_, v, imod(a.unit_ * b.unit_, mod), v + rel);
  }

  friend PadicElement operator/(const PadicElement& a, const PadicElement& b) {
    a.check_same(b);
    if (b.zero_)
      throw PrecisionError("division by certified zero");
    if (a.zero_) return zero(a.p_, a.absprec_ - b.val_);
    long rel = std::min(a.rel_precision(), b.rel_precision());
    long v = a.val_ - b.val_;
    Int mod = ipow(a.p_, static_cast<unsigned long>(rel));
    return PadicElement(a.p_, v, imod(a.unit_ * mod_inverse(b.unit_, mod), mod),
                        v + rel);
  }

  /// Lossless rescale by p^t.
  PadicElement shift(long t) const {
    if (zero_) return zero(p_, absprec_ + t);
    return PadicElement(p_, val_ + t, unit_, absprec_ + t);
  }

  PadicElement pow(unsigned long e) const {
    if (e == 0) return unit_one(p_, zero_ ? absprec_ : rel_precision());
    if (zero_) return zero(p_, absprec_);
    PadicElement acc = unit_one(p_, rel_precision());
    PadicElement base = *this;
    while (e > 0) {
      if (e & 1UL) acc = acc * base;
      base = base * base;
      e >>= 1UL;
    }
    return acc;
  }

  /// True when the two values agree modulo the smaller stated precision.
  bool agrees_with(const PadicElement& other) const {
    PadicElement d = *this - other;
    return d.is_zero();
  }

  std::string to_string() const {
    if (zero_) return "O(" + std::to_string(p_) + "^" + std::to_string(absprec_) + ")";
    return unit_.get_str() + "*" + std::to_string(p_) + "^" +
           std::to_string(val_) + " + O(" + std::to_string(p_) + "^" +
           std::to_string(absprec_) + ")";
  }

 private:
  static PadicElement unit_one(long p, long rel) {
    return PadicElement(p, 0, 1, rel);
  }
  void check_same(const PadicElement& o) const {
    if (p_ != o.p_) throw DomainError("PadicElement: mixed primes");
  }

  long p_;
  long val_;
  Int unit_;
  long absprec_;
  bool zero_;
};

/// Teichmueller lift omega(a): the root of unity congruent to a mod p
/// (p odd; for p = 2, omega(a) = +-1 with a = omega(a) mod 4), to absolute
/// precision M.
inline PadicElement teichmuller(const Int& a, long p, long M) {
  if (M < 1) throw DomainError("teichmuller: precision must be >= 1");
  Int mod = ipow(p, static_cast<unsigned long>(M));
  Int x = imod(a, mod);
  if (x % p == 0) throw DomainError("teichmuller: residue divisible by p");
  if (p == 2) {
    Int r = imod(a, Int(4));
    Int w = (r == 1) ? Int(1) : mod - 1;
    return PadicElement(2, 0, w, M);
  }
  // x -> x^p is a contraction toward the fixed point omega(a).
  for (long i = 0; i < M + 1; ++i) {
    Int nx = mod_pow(x, Int(p), mod);
    if (nx == x) break;
    x = nx;
  }
  return PadicElement(p, 0, x, M);
}

/// Iwasawa-branch logarithm of the unit x: log_p<x> where <x> = x/omega(x).
/// With this branch log_p(p) = 0, so log_p of any nonzero q in Q_p is the
/// log of its unit part's one-unit factor. Result has absolute precision M.
inline PadicElement log_angle(const Int& x, long p, long M) {
  if (M < 1) throw DomainError("log_angle: precision must be >= 1");
  Int mod = ipow(p, static_cast<unsigned long>(M));
  Int xr = imod(x, mod);
  if (xr % p == 0) throw DomainError("log_angle: residue divisible by p");
  PadicElement w = teichmuller(x, p, M);
  Int u = imod(xr * mod_inverse(w.unit_part(), mod), mod);
  Int z = imod(u - 1, mod);
  if (z == 0) return PadicElement::zero(p, M);
  long t = int_valuation(z, p);
  if (t >= M) return PadicElement::zero(p, M);
  // First index past which every term (u-1)^j / j is O(p^M); the term
  // valuation j*t - v_p(j) is non-decreasing in j since t >= 1.
  long J = 1;
  while (J * t - floor_log(J, p) < M) ++J;
  long guard = floor_log(J, p) + 1;
  Int big = ipow(p, static_cast<unsigned long>(M + guard));
  Int acc = 0;
  Int zpow = 1;
  for (long j = 1; j < J; ++j) {
    zpow = imod(zpow * z, big);
    // (-1)^(j-1) z^j / j with j = p^vj * j': divide the representative of
    // z^j exactly by p^vj (valid: vj <= guard), then by j' modularly.
    long vj = int_valuation(Int(j), p);
    Int term = zpow / ipow(p, static_cast<unsigned long>(vj));
    Int jp = Int(j) / ipow(p, static_cast<unsigned long>(vj));
    term = imod(term * mod_inverse(imod(jp, mod), mod), mod);
    if (j % 2 == 0) term = imod(mod - term, mod);
    acc = imod(acc + term, mod);
  }
  if (acc == 0) return PadicElement::zero(p, M);
  long v = int_valuation(acc, p);
  if (v >= M) return PadicElement::zero(p, M);
  return PadicElement(p, v, acc / ipow(p, static_cast<unsigned long>(v)), M);
}

}  // namespace linv
