#pragma once

#include <algorithm>
#include <vector>

#include "linv/errors.hpp"
#include "linv/fp_poly.hpp"
#include "linv/int_poly.hpp"
#include "linv/rational.hpp"

namespace linv {

/// One irreducible factor of a monic polynomial over Q_p. The modulus lives
/// in a transformed variable y with  x = a_shift + p^a_scale * y  relating a
/// root y of the modulus to a root x of the original polynomial; scaling and
/// shifting keep reductions mod p informative for congruent eigenvalue
/// families (at tame level one every Hecke charpoly reduces to a power of a
/// single linear factor, so this is the common path, not the exception).
struct QpFactorInfo {
  ZPoly modulus;        // monic, irreducible over Q_p, leaf variable
  long prec = 0;        // coefficients known modulo p^prec
  long e = 1;           // ramification index of Q_p[y]/(modulus)
  long f0 = 1;          // residue degree
  FpPoly residue_poly;  // cuts the residue field (leaf variable)
  Int shift_root = 0;   // ramified leaves: residue eval point (always 0 here)
  Int a_shift = 0;      // root transform: x = a_shift + p^a_scale * y
  long a_scale = 0;

  long degree() const { return zp_degree(modulus); }
};

namespace detail {

inline long coeff_val(const Int& c, long p, long prec, const Int& pM) {
  Int r = imod(c, pM);
  if (r == 0) return prec;
  return std::min(int_valuation(r, p), prec);
}

/// Hensel-split a monic H mod p^prec along the primary parts of its mod-p
/// reduction, then recurse. Leaves are certified irreducible.
inline void factor_block(ZPoly H, long p, long prec, Int a_shift, long a_scale,
                         long depth, std::vector<QpFactorInfo>& out) {
  long D = zp_degree(H);
  if (depth > 64)
    throw ComputationError("qp_factor: block recursion too deep");
  if (prec < 2)
    throw PrecisionError("qp_factor: working precision exhausted");
  Int pM = ipow(p, static_cast<unsigned long>(prec));
  H = zp_mod(H, pM);
  if (imod(H.back(), pM) != 1)
    throw ComputationError("qp_factor: block lost monicity");

  if (D == 1) {
    QpFactorInfo info;
    info.modulus = H;
    info.prec = prec;
    info.e = 1;
    info.f0 = 1;
    info.residue_poly = fp_from_int_poly(H, p);
    info.a_shift = a_shift;
    info.a_scale = a_scale;
    out.push_back(std::move(info));
    return;
  }

  FpPoly hbar = fp_from_int_poly(H, p);
  auto modular = fp_factor(hbar);

  if (modular.size() > 1) {
    std::vector<FpPoly> primary;
    for (auto& [h, m] : modular) {
      FpPoly part = FpPoly::one(p);
      for (long i = 0; i < m; ++i) part = fp_mul(part, h);
      primary.push_back(part);
    }
    auto lifted = hensel_lift(H, primary, p, prec);
    for (auto& part : lifted)
      factor_block(part, p, prec, a_shift, a_scale, depth + 1, out);
    return;
  }

  const auto& [h, mult] = modular[0];
  if (mult == 1) {
    // irreducible residue: unramified leaf
    QpFactorInfo info;
    info.modulus = H;
    info.prec = prec;
    info.e = 1;
    info.f0 = h.degree();
    info.residue_poly = h;
    info.a_shift = a_shift;
    info.a_scale = a_scale;
    out.push_back(std::move(info));
    return;
  }
  if (h.degree() > 1)
    throw ComputationError(
        "qp_factor: repeated non-linear residue block (unsupported; needs "
        "higher-order lifting)");

  // primary block over a single linear residue: center at the root
  long r = ((p - h.coeff(0)) % p + p) % p;
  if (r != 0) {
    H = zp_mod(zp_shift(H, Int(r)), pM);
    a_shift += Int(r) * ipow(p, static_cast<unsigned long>(a_scale));
  }
  // H = z^D mod p now; read the Newton polygon from coefficient valuations
  std::vector<long> v(D + 1);
  for (long j = 0; j <= D; ++j)
    v[j] = coeff_val(j < static_cast<long>(H.size()) ? H[j] : Int(0), p, prec, pM);

  // minimal root valuation: lambda_min = min_j v_j / (D - j)
  long t = 0;  // floor(lambda_min); non-negative here
  {
    Rat lam_min(0);
    bool have = false;
    for (long j = 0; j < D; ++j) {
      Rat lam(Int(v[j]), Int(D - j));
      lam.canonicalize();
      if (!have || lam < lam_min) {
        lam_min = lam;
        have = true;
      }
    }
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), lam_min.get_num().get_mpz_t(),
               lam_min.get_den().get_mpz_t());
    t = fl.get_si();
  }

  // single-segment totally-ramified certificate
  {
    long v0 = v[0];
    bool single = v0 < prec;
    if (single) {
      for (long j = 1; j < D; ++j)
        if (static_cast<long long>(v[j]) * D <
            static_cast<long long>(v0) * (D - j)) {
          single = false;
          break;
        }
    }
    if (single && igcd(Int(v[0]), Int(D)) == 1) {
      QpFactorInfo info;
      info.modulus = H;
      info.prec = prec;
      info.e = D;
      info.f0 = 1;
      info.residue_poly = FpPoly::x(p);
      info.shift_root = 0;
      info.a_shift = a_shift;
      info.a_scale = a_scale;
      out.push_back(std::move(info));
      return;
    }
  }

  if (t >= 1) {
    // scale y = z / p^t: W(y) = H(p^t y) / p^(D t), integral since the
    // polygon lies above the slope line; costs D*t digits of precision
    long new_prec = prec - D * t;
    if (new_prec < 2)
      throw PrecisionError("qp_factor: precision exhausted while scaling");
    ZPoly W(D + 1, Int(0));
    Int pnew = ipow(p, static_cast<unsigned long>(new_prec));
    for (long j = 0; j <= D; ++j) {
      Int c = j < static_cast<long>(H.size()) ? imod(H[j], pM) : Int(0);
      long shift_exp = j * t - D * t;  // multiply by p^(j t - D t)
      // c * p^(jt) / p^(Dt): representative divisibility is guaranteed by
      // the polygon bound v_j >= (D - j) t
      Int num = c * ipow(p, static_cast<unsigned long>(j * t));
      Int den = ipow(p, static_cast<unsigned long>(D * t));
      if (imod(num, den) != 0)
        throw PrecisionError("qp_factor: scaling divisibility lost");
      W[j] = imod(num / den, pnew);
      (void)shift_exp;
    }
    factor_block(W, p, new_prec, a_shift, a_scale + t, depth + 1, out);
    return;
  }

  throw ComputationError(
      "qp_factor: primary block with fractional-slope polygon (unsupported; "
      "needs ramified base change)");
}

}  // namespace detail

/// Factor a monic integer polynomial, squarefree over Q, into irreducible
/// factors over Q_p. Works through shifted/scaled variables so that blocks of
/// p-adically congruent roots are genuinely separated; blocks needing a
/// ramified base change are rejected loudly rather than mis-handled.
inline std::vector<QpFactorInfo> qp_factor(const ZPoly& F, long p, long prec) {
  if (F.empty() || F.back() != 1) throw DomainError("qp_factor: not monic");
  std::vector<QpFactorInfo> out;
  if (zp_degree(F) == 0) return out;
  detail::factor_block(F, p, prec, Int(0), 0, 0, out);
  std::sort(out.begin(), out.end(), [](const QpFactorInfo& a,
                                       const QpFactorInfo& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.a_scale != b.a_scale) return a.a_scale < b.a_scale;
    if (a.a_shift != b.a_shift) return a.a_shift < b.a_shift;
    for (size_t i = a.modulus.size(); i-- > 0;)
      if (a.modulus[i] != b.modulus[i]) return a.modulus[i] < b.modulus[i];
    return false;
  });
  return out;
}

}  // namespace linv
