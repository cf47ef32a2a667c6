#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "linv/errors.hpp"
#include "linv/fp_poly.hpp"
#include "linv/int_poly.hpp"
#include "linv/padic.hpp"
#include "linv/qp_factor.hpp"
#include "linv/rational.hpp"

namespace linv {

class LocalFieldElement;

/// A finite extension K = Q_p[x]/(g) with g monic irreducible, carried to a
/// fixed working precision. Only p-adic valuations (and residues) of elements
/// are ever consumed downstream, so no global number-field machinery appears.
class LocalField : public std::enable_shared_from_this<LocalField> {
 public:
  /// From factorization metadata (preferred: knows e, f0, residue data).
  static std::shared_ptr<LocalField> from_factor(const QpFactorInfo& info,
                                                 long p) {
    auto k = std::shared_ptr<LocalField>(new LocalField());
    k->p_ = p;
    k->prec_ = info.prec;
    k->set_modulus(info.modulus, p, info.prec);
    k->e_ = info.e;
    k->f0_ = info.f0;
    k->residue_poly_ = info.residue_poly;
    k->shift_root_ = info.shift_root;
    k->has_residue_data_ = true;
    return k;
  }

  /// Raw modulus (tests, ad-hoc fields); residue-field operations unavailable.
  static std::shared_ptr<LocalField> from_modulus(const ZPoly& g, long p,
                                                  long prec) {
    auto k = std::shared_ptr<LocalField>(new LocalField());
    k->p_ = p;
    k->prec_ = prec;
    k->set_modulus(g, p, prec);
    k->e_ = 0;
    k->f0_ = 0;
    k->has_residue_data_ = false;
    return k;
  }

  long p() const { return p_; }
  long prec() const { return prec_; }
  long degree() const { return static_cast<long>(g_.size()) - 1; }
  long ramification() const { return e_; }
  long residue_degree() const { return f0_; }
  bool has_residue_data() const { return has_residue_data_; }
  const FpPoly& residue_poly() const { return residue_poly_; }
  const std::vector<PadicElement>& modulus() const { return g_; }

  LocalFieldElement zero() const;
  LocalFieldElement one() const;
  LocalFieldElement gen() const;
  LocalFieldElement from_rational(const Rat& r) const;
  LocalFieldElement from_padic(const PadicElement& a) const;
  LocalFieldElement from_coeffs(std::vector<PadicElement> c) const;

 private:
  LocalField() = default;
  void set_modulus(const ZPoly& g, long p, long prec) {
    long n = zp_degree(g);
    if (n < 1) throw DomainError("LocalField: modulus must be nonconstant");
    g_.reserve(n + 1);
    for (long i = 0; i <= n; ++i)
      g_.push_back(PadicElement::from_int(g[i], p, prec));
  }

  long p_ = 0;
  long prec_ = 0;
  std::vector<PadicElement> g_;
  long e_ = 0, f0_ = 0;
  FpPoly residue_poly_;
  Int shift_root_ = 0;
  bool has_residue_data_ = false;

  friend class LocalFieldElement;
};

/// Element of a LocalField: a polynomial residue with PadicElement
/// coefficients. Valuation is v_p(Norm)/deg(g), the unique extension of v_p.
class LocalFieldElement {
 public:
  LocalFieldElement(std::shared_ptr<const LocalField> K,
                    std::vector<PadicElement> coeffs)
      : K_(std::move(K)), c_(std::move(coeffs)) {
    c_.resize(K_->degree(), PadicElement::zero(K_->p(), K_->prec()));
  }

  const std::shared_ptr<const LocalField>& field() const { return K_; }
  const std::vector<PadicElement>& coeffs() const { return c_; }
  long p() const { return K_->p(); }

  bool is_certified_zero() const {
    for (const auto& a : c_)
      if (!a.is_zero()) return false;
    return true;
  }

  /// Smallest stated absolute precision among the coefficients.
  long min_abs_prec() const {
    long m = K_->prec();
    for (const auto& a : c_) m = std::min(m, a.abs_precision());
    return m;
  }

  /// Coefficient-wise minimum valuation; equals the true valuation in the
  /// unramified case and is a cheap pivot proxy in general.
  long coeff_valuation() const {
    long v = K_->prec();
    for (const auto& a : c_)
      if (!a.is_zero()) v = std::min(v, a.valuation());
    return v;
  }

  LocalFieldElement operator-() const {
    std::vector<PadicElement> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
    return LocalFieldElement(K_, std::move(c));
  }

  friend LocalFieldElement operator+(const LocalFieldElement& a,
                                     const LocalFieldElement& b) {
    std::vector<PadicElement> c(a.c_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] + b.c_[i];
    return LocalFieldElement(a.K_, std::move(c));
  }

  friend LocalFieldElement operator-(const LocalFieldElement& a,
                                     const LocalFieldElement& b) {
    return a + (-b);
  }

  LocalFieldElement scaled(const PadicElement& s) const {
    std::vector<PadicElement> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] * s;
    return LocalFieldElement(K_, std::move(c));
  }

  LocalFieldElement scaled(const Rat& s) const {
    if (s == 0) return K_->zero();
    return scaled(PadicElement::from_rational(
        s, K_->p(), K_->prec() + std::max(0L, -rat_valuation(s, K_->p()))));
  }

  friend LocalFieldElement operator*(const LocalFieldElement& a,
                                     const LocalFieldElement& b) {
    long n = a.K_->degree();
    long p = a.K_->p();
    long prec = a.K_->prec();
    std::vector<PadicElement> prod(2 * n - 1, PadicElement::zero(p, prec));
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j)
        prod[i + j] = prod[i + j] + a.c_[i] * b.c_[j];
    // reduce modulo the monic modulus
    const auto& g = a.K_->modulus();
    for (long d = 2 * n - 2; d >= n; --d) {
      PadicElement lead = prod[d];
      if (lead.is_zero()) continue;
      for (long j = 0; j <= n; ++j)
        prod[d - n + j] = prod[d - n + j] - lead * g[j];
    }
    prod.resize(n);
    return LocalFieldElement(a.K_, std::move(prod));
  }

  /// Matrix of multiplication by this element on the power basis.
  std::vector<std::vector<PadicElement>> mult_matrix() const {
    long n = K_->degree();
    std::vector<std::vector<PadicElement>> m(
        n, std::vector<PadicElement>(n, PadicElement::zero(p(), K_->prec())));
    LocalFieldElement cur = *this;
    for (long j = 0; j < n; ++j) {
      for (long i = 0; i < n; ++i) m[i][j] = cur.c_[i];
      if (j + 1 < n) cur = cur * K_->gen();
    }
    return m;
  }

  /// Norm to Q_p as a PadicElement (determinant of the mult matrix).
  PadicElement norm() const {
    auto m = mult_matrix();
    long n = K_->degree();
    PadicElement det =
        PadicElement::from_int(1, p(), K_->prec() + 2 * n * 4 + 8);
    int sign = 1;
    for (long col = 0; col < n; ++col) {
      long best = -1;
      long bestval = 0;
      for (long row = col; row < n; ++row) {
        if (m[row][col].is_zero()) continue;
        long v = m[row][col].valuation();
        if (best < 0 || v < bestval) {
          best = row;
          bestval = v;
        }
      }
      if (best < 0) {
        // column certified zero at stated precision: determinant certified 0
        long zp = m[col][col].abs_precision();
        return det * PadicElement::zero(p(), zp);
      }
      if (best != col) {
        std::swap(m[best], m[col]);
        sign = -sign;
      }
      det = det * m[col][col];
      for (long row = col + 1; row < n; ++row) {
        if (m[row][col].is_zero()) continue;
        PadicElement f = m[row][col] / m[col][col];
        for (long j = col; j < n; ++j)
          m[row][j] = m[row][j] - f * m[col][j];
      }
    }
    return sign > 0 ? det : -det;
  }

  /// Exact rational valuation with denominator dividing the ramification
  /// index: v(alpha) = v_p(Norm(alpha)) / deg(g). Throws PrecisionError when
  /// the norm is indistinguishable from zero at working precision; returns
  /// nullopt for the certified-zero element (valuation +infinity).
  std::optional<Rat> valuation() const {
    if (is_certified_zero()) return std::nullopt;
    PadicElement nm = norm();
    if (nm.is_zero())
      throw PrecisionError(
          "valuation: norm indistinguishable from 0 at working precision");
    Rat v(Int(nm.valuation()), Int(K_->degree()));
    v.canonicalize();
    return v;
  }

  /// Multiplicative inverse via the mult matrix; PrecisionError when singular
  /// at working precision.
  LocalFieldElement inverse() const {
    long n = K_->degree();
    auto m = mult_matrix();
    std::vector<PadicElement> rhs(n, PadicElement::zero(p(), K_->prec()));
    rhs[0] = PadicElement::from_int(1, p(), K_->prec());
    // Gaussian elimination with min-valuation pivoting
    std::vector<long> perm(n);
    for (long col = 0; col < n; ++col) {
      long best = -1;
      long bestval = 0;
      for (long row = col; row < n; ++row) {
        if (m[row][col].is_zero()) continue;
        long v = m[row][col].valuation();
        if (best < 0 || v < bestval) {
          best = row;
          bestval = v;
        }
      }
      if (best < 0) throw PrecisionError("inverse: singular at precision");
      std::swap(m[best], m[col]);
      std::swap(rhs[best], rhs[col]);
      for (long row = 0; row < n; ++row) {
        if (row == col || m[row][col].is_zero()) continue;
        PadicElement f = m[row][col] / m[col][col];
        for (long j = 0; j < n; ++j) m[row][j] = m[row][j] - f * m[col][j];
        rhs[row] = rhs[row] - f * rhs[col];
      }
    }
    std::vector<PadicElement> c(n, PadicElement::zero(p(), K_->prec()));
    for (long i = 0; i < n; ++i) c[i] = rhs[i] / m[i][i];
    return LocalFieldElement(K_, std::move(c));
  }

  friend LocalFieldElement operator/(const LocalFieldElement& a,
                                     const LocalFieldElement& b) {
    return a * b.inverse();
  }

  bool agrees_with(const LocalFieldElement& other) const {
    return (*this - other).is_certified_zero();
  }

  /// Residue in the packet's residue field (an FpPoly modulo residue_poly),
  /// defined for elements of non-negative valuation.
  FpPoly residue() const {
    if (!K_->has_residue_data_)
      throw ComputationError("residue: field lacks residue data");
    long p = K_->p();
    if (K_->f0_ == 1 && K_->e_ > 1) {
      // totally ramified: evaluate at the unit shift root, then reduce
      PadicElement acc = PadicElement::zero(p, K_->prec());
      PadicElement r = PadicElement::from_int(K_->shift_root_, p, K_->prec());
      for (size_t i = c_.size(); i-- > 0;) acc = acc * r + c_[i];
      return FpPoly::constant(p, residue_of_padic(acc));
    }
    // unramified: reduce coefficients mod p
    std::vector<long> rc(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) rc[i] = residue_of_padic(c_[i]);
    return fp_rem(FpPoly(p, std::move(rc)), K_->residue_poly_);
  }

  std::string to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ", ";
      s += c_[i].to_string();
    }
    return s + "]";
  }

 private:
  long residue_of_padic(const PadicElement& a) const {
    if (a.is_zero()) {
      if (a.abs_precision() < 1)
        throw PrecisionError("residue: insufficient precision");
      return 0;
    }
    if (a.valuation() < 0) throw DomainError("residue: negative valuation");
    if (a.valuation() > 0) return 0;
    return imod(a.unit_part(), Int(p())).get_si();
  }

  std::shared_ptr<const LocalField> K_;
  std::vector<PadicElement> c_;
};

inline LocalFieldElement LocalField::zero() const {
  return LocalFieldElement(shared_from_this(), {});
}

inline LocalFieldElement LocalField::one() const {
  return from_rational(Rat(1));
}

inline LocalFieldElement LocalField::gen() const {
  std::vector<PadicElement> c(degree(), PadicElement::zero(p_, prec_));
  if (degree() == 1) {
    // x = -g[0] in the degree-one case
    c[0] = -g_[0];
  } else {
    c[1] = PadicElement::from_int(1, p_, prec_);
  }
  return LocalFieldElement(shared_from_this(), std::move(c));
}

inline LocalFieldElement LocalField::from_rational(const Rat& r) const {
  std::vector<PadicElement> c(degree(), PadicElement::zero(p_, prec_));
  long extra = 0;
  if (r != 0) extra = std::max(0L, -rat_valuation(r, p_));
  c[0] = PadicElement::from_rational(r, p_, prec_ + extra);
  return LocalFieldElement(shared_from_this(), std::move(c));
}

inline LocalFieldElement LocalField::from_padic(const PadicElement& a) const {
  std::vector<PadicElement> c(degree(), PadicElement::zero(p_, prec_));
  c[0] = a;
  return LocalFieldElement(shared_from_this(), std::move(c));
}

inline LocalFieldElement LocalField::from_coeffs(
    std::vector<PadicElement> c) const {
  return LocalFieldElement(shared_from_this(), std::move(c));
}

/// Horner evaluation of a rational polynomial at a field element.
inline LocalFieldElement evaluate_poly(const QPoly& h,
                                       const LocalFieldElement& x) {
  auto K = x.field();
  LocalFieldElement acc = K->zero();
  for (size_t i = h.size(); i-- > 0;) acc = acc * x + K->from_rational(h[i]);
  return acc;
}

/// Spec-facing valuation accessor: finite rational, or infinite for zero.
struct ValuationResult {
  bool infinite;
  Rat value;
};

inline ValuationResult valuation_of(const LocalFieldElement& a) {
  auto v = a.valuation();
  if (!v) return {true, Rat(0)};
  return {false, *v};
}

}  // namespace linv
