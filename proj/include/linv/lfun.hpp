#pragma once

#include <map>
#include <optional>
#include <vector>

#include "linv/eigen.hpp"
#include "linv/hecke.hpp"
#include "linv/local_field.hpp"
#include "linv/padic.hpp"

namespace linv {

inline Int binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

/// Quadratic twist data: a fundamental discriminant D (or 1) whose character
/// chi_D flips the functional-equation and a_p signs as required. The Gauss
/// sum 1/tau(chi) of the twisting formula is deliberately omitted everywhere:
/// it is a common scalar of valuation zero (p never divides D), so every
/// reported valuation is unaffected, but raw twisted symbol values are off by
/// exactly that scalar.
struct TwistContext {
  Int D = 1;
  long conductor = 1;
  std::vector<int> chi;  // chi_D(b) for b = 0..|D|-1
  int chi_minus1 = 1;

  int chi_at(const Int& b) const {
    return chi[imod(b, Int(conductor)).get_si()];
  }
};

inline TwistContext make_twist_context(const Int& D) {
  if (!is_fundamental_discriminant(D))
    throw DomainError("make_twist_context: not a fundamental discriminant");
  TwistContext t;
  t.D = D;
  Int absD = abs(D);
  t.conductor = absD.get_si();
  t.chi.resize(t.conductor);
  for (long b = 0; b < t.conductor; ++b) t.chi[b] = kronecker(D, Int(b));
  if (t.conductor == 1) t.chi[0] = 1;
  t.chi_minus1 = (D > 0) ? 1 : -1;
  return t;
}

/// Analytic sign of the functional equation from the Atkin-Lehner
/// eigenvalue: eps = (-1)^(k/2) * w.
inline int analytic_sign(long k, int w_sign) {
  return ((k / 2) % 2 == 0 ? 1 : -1) * w_sign;
}

/// Star parity carrying the central values of the chi-twist.
inline int central_parity(long k, const TwistContext& tw) {
  int par = ((k / 2 - 1) % 2 == 0) ? 1 : -1;
  return tw.chi_minus1 * par;
}

/// Enumerate admissible fundamental discriminants for a component: coprime
/// to Np, matching the sign conditions chi_D(-Np) = eps(f), chi_D(p) = sign
/// of a_p. Ordered by |D| with positive D first.
inline std::vector<Int> admissible_discriminants(long N, long p, int ap_sign,
                                                 int w_sign, long k,
                                                 long bound) {
  int eps = analytic_sign(k, w_sign);
  std::vector<Int> out;
  for (const Int& D : fundamental_discriminants(bound)) {
    if (igcd(D, Int(N * p)) != 1) continue;
    if (quad_char(D, Int(p)) != ap_sign) continue;
    if (quad_char(D, Int(-N * p)) != eps) continue;
    out.push_back(D);
  }
  return out;
}

/// Truncated Taylor coefficients of x^(k/2-1) * log_p<x> at x = a, degrees
/// 0..k-2. Coefficient m is
///   binom(j0, m) a^(j0-m) log<a> + sum_t binom(j0, m-t) a^(j0-m) (-1)^(t-1)/t
/// with j0 = k/2 - 1; the bound v_p(c_m) >= -floor(log_p m) is asserted.
inline std::vector<PadicElement> taylor_truncation(const Int& a, long k,
                                                   long p, long M) {
  if (imod(a, Int(p)) == 0) throw DomainError("taylor_truncation: p | a");
  long j0 = k / 2 - 1;
  PadicElement loga = log_angle(a, p, M);
  std::vector<PadicElement> out;
  out.reserve(k - 1);
  for (long m = 0; m <= k - 2; ++m) {
    // exact rational part: sum over t >= 1 of binom(j0, m-t) a^(j0-m) (-1)^(t-1)/t
    Rat rational_part = 0;
    for (long t = std::max(1L, m - j0); t <= m; ++t) {
      Rat term = Rat(binom(j0, m - t));
      if (term == 0) continue;
      term /= Rat(t);
      if ((t - 1) % 2 != 0) term = -term;
      rational_part += term;
    }
    PadicElement c = PadicElement::zero(p, M);
    if (rational_part != 0) {
      // a^(j0 - m) may have negative exponent; exact rational power of a unit
      Rat apow(1);
      long e = j0 - m;
      Rat abase(a);
      if (e >= 0)
        apow = Rat(ipow(a, static_cast<unsigned long>(e)));
      else
        apow = Rat(1) / Rat(ipow(a, static_cast<unsigned long>(-e)));
      c = c + PadicElement::from_rational(rational_part * apow, p, M);
    }
    Int bm = binom(j0, m);
    if (bm != 0) {
      Rat lead = Rat(bm);
      long e = j0 - m;
      if (e >= 0)
        lead *= Rat(ipow(a, static_cast<unsigned long>(e)));
      else
        lead /= Rat(ipow(a, static_cast<unsigned long>(-e)));
      c = c + loga * PadicElement::from_rational(lead, p, M + 1);
    }
    if (m >= 1 && !c.is_zero()) {
      long bound = -floor_log(m, p);
      if (c.valuation() < bound)
        throw ComputationError("taylor_truncation: Lemma-style bound violated");
    }
    out.push_back(c);
  }
  return out;
}

/// Riemann-sum estimate of the central p-adic L-derivative with its
/// certificate (digits relative to the nu-normalized period).
struct DerivativeEstimate {
  long n;
  LocalFieldElement value;
  Rat certified_digits;

  DerivativeEstimate(long n_, LocalFieldElement v, Rat digits)
      : n(n_), value(std::move(v)), certified_digits(std::move(digits)) {}
};

/// Evaluates the eigen-symbol of one packet on paths, twists, and Riemann
/// sums. Caches unimodular path decompositions and lambda tables; instances
/// are not thread-safe and are used by one worker at a time.
class LFunEvaluator {
 public:
  LFunEvaluator(SpaceContext& ctx, const EigenPacket& pkt)
      : ctx_(ctx), pkt_(pkt), p_(pkt.comp->p), k_(ctx.weight()) {}

  const EigenPacket& packet() const { return pkt_; }

  /// Raw pairing: value of the eigen-symbol on P over the path {oo -> a/m},
  /// with P given by monomial coefficients (X-degree index).
  LocalFieldElement path_pairing(const QPoly& P, const Int& a, const Int& m) {
    const auto& paired = paired_monomials(a, m);
    LocalFieldElement acc = pkt_.K->zero();
    for (long i = 0; i < static_cast<long>(P.size()); ++i) {
      if (P[i] == 0) continue;
      acc = acc + paired[i].scaled(P[i]);
    }
    return acc;
  }

  /// Modular symbol lambda_f(z^i, a, m) for all i = 0..k-2: the symbol of
  /// (m z + a)^i over {oo -> -a/m}.
  const std::vector<LocalFieldElement>& lambda_values(const Int& a,
                                                      const Int& m) {
    auto key = std::make_pair(a, m);
    auto it = lambda_cache_.find(key);
    if (it != lambda_cache_.end()) return it->second;
    const auto& paired = paired_monomials(-a, m);
    std::vector<LocalFieldElement> vals;
    vals.reserve(k_ - 1);
    for (long i = 0; i <= k_ - 2; ++i) {
      LocalFieldElement acc = pkt_.K->zero();
      for (long j = 0; j <= i; ++j) {
        Rat c = Rat(binom(i, j)) * Rat(ipow(m, static_cast<unsigned long>(j))) *
                Rat(ipow(a, static_cast<unsigned long>(i - j)));
        if (c == 0) continue;
        acc = acc + paired[j].scaled(c);
      }
      vals.push_back(acc);
    }
    return lambda_cache_.emplace(key, std::move(vals)).first->second;
  }

  /// lambda_f(P, a, m) for a polynomial P (coefficients in z).
  LocalFieldElement lambda_poly(const QPoly& P, const Int& a, const Int& m) {
    const auto& vals = lambda_values(a, m);
    LocalFieldElement acc = pkt_.K->zero();
    for (long i = 0; i < static_cast<long>(P.size()); ++i) {
      if (P[i] == 0) continue;
      acc = acc + vals[i].scaled(P[i]);
    }
    return acc;
  }

  /// mu_f(P, a, p^n) = a_p^-n lambda_f(P, a, p^n), untwisted.
  LocalFieldElement mu_value(const QPoly& P, const Int& a, long n) {
    if (n < 1) throw DomainError("mu_value: n >= 1 required");
    Int pn = ipow(p_, static_cast<unsigned long>(n));
    if (imod(a, Int(p_)) == 0)
      throw DomainError("mu_value: a must be a p-adic unit");
    Rat apinv = ap_inverse_power(pkt_.comp->ap_sign, n);
    return lambda_poly(P, a, pn).scaled(apinv);
  }

  /// Twisted lambda values summed against chi: W[i] = sum_b chi(b)
  /// lambda_f(z^i, D a - p^n b, D p^n), cached per (twist, n).
  const std::vector<std::vector<LocalFieldElement>>& twist_table(
      const TwistContext& tw, long n) {
    auto key = std::make_pair(tw.D, n);
    auto it = twist_tables_.find(key);
    if (it != twist_tables_.end()) return it->second;
    Int pn = ipow(p_, static_cast<unsigned long>(n));
    std::vector<Int> units;
    for (Int a = 1; a < pn; ++a)
      if (imod(a, Int(p_)) != 0) units.push_back(a);
    std::vector<std::vector<LocalFieldElement>> table(
        k_ - 1,
        std::vector<LocalFieldElement>(units.size(), pkt_.K->zero()));
    for (size_t ai = 0; ai < units.size(); ++ai) {
      for (long b = 1; b <= tw.conductor; ++b) {
        int chi = tw.chi_at(Int(b));
        if (chi == 0) continue;
        Int arg = tw.D * units[ai] - pn * b;
        const auto& vals = lambda_values(arg, tw.D * pn);
        for (long i = 0; i <= k_ - 2; ++i) {
          table[i][ai] = (chi > 0) ? (table[i][ai] + vals[i])
                                   : (table[i][ai] - vals[i]);
        }
      }
    }
    return twist_tables_.emplace(key, std::move(table)).first->second;
  }

  /// Twisted mu: mu_{f_chi}((x - a)^m, a, p^n) up to the omitted Gauss sum.
  LocalFieldElement twisted_mu_power(const TwistContext& tw, const Int& a,
                                     long m, long n) {
    const auto& table = twist_table(tw, n);
    long ai = unit_index(a, n);
    LocalFieldElement acc = pkt_.K->zero();
    for (long i = 0; i <= m; ++i) {
      // (x - Da)^m expanded; overall D^-m from substituting x -> x/D
      Rat c = Rat(binom(m, i));
      if (c == 0) continue;
      Int base = -tw.D * a;
      Rat pw(1);
      if (m - i > 0) pw = Rat(ipow(base, static_cast<unsigned long>(m - i)));
      c *= pw;
      acc = acc + table[i][ai].scaled(c);
    }
    Rat dinv = Rat(1) / Rat(ipow(tw.D, static_cast<unsigned long>(m)));
    return acc.scaled(dinv * ap_inverse_power(+1, n));
  }

  /// Central value L_infty(f_chi, k/2) = lambda_{f_chi}(z^(k/2-1), 0, 1),
  /// up to the omitted scalars; certified-zero signals the twist search to
  /// continue.
  LocalFieldElement central_value(const TwistContext& tw) {
    long j = k_ / 2 - 1;
    LocalFieldElement acc = pkt_.K->zero();
    for (long b = 1; b <= tw.conductor; ++b) {
      int chi = tw.chi_at(Int(b));
      if (chi == 0) continue;
      const auto& vals = lambda_values(Int(-b), tw.D);
      acc = (chi > 0) ? (acc + vals[j]) : (acc - vals[j]);
    }
    Rat dinv = Rat(1) / Rat(ipow(tw.D, static_cast<unsigned long>(j)));
    return acc.scaled(dinv);
  }

  /// L_n: the depth-n Riemann-sum estimate of L_p'(f_chi, k/2), with the
  /// Theorem-style certificate n k/2 - floor(log(k-1)/log p) (relative to
  /// the nu-normalized period). Asserts the mu integrality bound on every
  /// term it sums.
  DerivativeEstimate derivative_estimate(const TwistContext& tw, long n,
                                         const Rat& nu) {
    if (n < 1) throw DomainError("derivative_estimate: n >= 1");
    Int pn = ipow(p_, static_cast<unsigned long>(n));
    long M = working_precision();
    LocalFieldElement acc = pkt_.K->zero();
    for (Int a = 1; a < pn; ++a) {
      if (imod(a, Int(p_)) == 0) continue;
      auto coeffs = taylor_truncation(a, k_, p_, M);
      for (long m = 0; m <= k_ - 2; ++m) {
        if (coeffs[m].is_zero()) continue;
        LocalFieldElement mu = twisted_mu_power(tw, a, m, n);
        assert_mu_bound(mu, nu, m, n);
        acc = acc + mu.scaled(coeffs[m]);
      }
    }
    Rat digits = Rat(n * k_) / 2 - Rat(floor_log(k_ - 1, p_));
    digits.canonicalize();
    return DerivativeEstimate(n, std::move(acc), std::move(digits));
  }

  /// The exact Riemann sum for L_p(f_chi, k/2) (no degree truncation):
  /// vanishes identically in the exceptional-zero situation.
  LocalFieldElement exceptional_zero_sum(const TwistContext& tw, long n) {
    Int pn = ipow(p_, static_cast<unsigned long>(n));
    long j = k_ / 2 - 1;
    const auto& table = twist_table(tw, n);
    LocalFieldElement acc = pkt_.K->zero();
    long ai = 0;
    for (Int a = 1; a < pn; ++a) {
      if (imod(a, Int(p_)) == 0) continue;
      acc = acc + table[j][ai];
      ++ai;
    }
    Rat scale = Rat(1) / Rat(ipow(tw.D, static_cast<unsigned long>(j)));
    return acc.scaled(scale * ap_inverse_power(+1, n));
  }

  /// Check v(mu) - nu >= n (m - (k-2)/2) (Lemma-type integrality); violations
  /// indicate a conventions bug and abort the run.
  void assert_mu_bound(const LocalFieldElement& mu, const Rat& nu, long m,
                       long n) {
    Rat bound = nu + Rat(n) * (Rat(m) - Rat(k_ - 2, 2));
    if (mu.is_certified_zero()) return;  // v >= stated precision floor
    auto v = mu.valuation();
    if (!v) return;
    if (*v < bound)
      throw ComputationError("mu integrality bound violated");
  }

 private:
  long working_precision() const { return pkt_.prec; }

  Rat ap_inverse_power(int sign, long n) const {
    Rat r = Rat(1) / Rat(ipow(p_, static_cast<unsigned long>(n * (k_ / 2 - 1))));
    if (sign < 0 && n % 2 != 0) r = -r;
    r.canonicalize();
    return r;
  }

  long unit_index(const Int& a, long n) const {
    // index of a among units of Z/p^n in increasing order:
    // #{x in [1, a) : p does not divide x} = (a-1) - floor((a-1)/p)
    Int pn = ipow(p_, static_cast<unsigned long>(n));
    Int ar = imod(a, pn);
    Int idx = (ar - 1) - (ar - 1) / p_;
    return idx.get_si();
  }

  /// Pairings of all monomial path vectors over {oo -> a/m}, cached by the
  /// reduced target fraction.
  const std::vector<LocalFieldElement>& paired_monomials(const Int& a,
                                                         const Int& m) {
    Cusp target = Cusp{a, m}.normalized();
    auto key = std::make_pair(target.x, target.y);
    auto it = paired_cache_.find(key);
    if (it != paired_cache_.end()) return it->second;
    QMat pm = ctx_.space().path_matrix(Cusp::infinity(), target);
    std::vector<LocalFieldElement> paired;
    paired.reserve(k_ - 1);
    for (long i = 0; i <= k_ - 2; ++i) {
      QMat col(ctx_.dim(), 1);
      for (long r = 0; r < ctx_.dim(); ++r) col.at(r, 0) = pm.at(r, i);
      paired.push_back(pkt_.pair(col));
    }
    return paired_cache_.emplace(key, std::move(paired)).first->second;
  }

  SpaceContext& ctx_;
  const EigenPacket& pkt_;
  long p_, k_;
  std::map<std::pair<Int, Int>, std::vector<LocalFieldElement>> paired_cache_;
  std::map<std::pair<Int, Int>, std::vector<LocalFieldElement>> lambda_cache_;
  std::map<std::pair<Int, long>, std::vector<std::vector<LocalFieldElement>>>
      twist_tables_;
};

}  // namespace linv
