#pragma once

#include <vector>

#include "linv/errors.hpp"
#include "linv/padic.hpp"
#include "linv/rational.hpp"

namespace linv {

namespace detail {

/// q-expansion of j = E_4^3 / Delta: coefficients j_n for n = -1..terms-2
/// (so out[0] = 1 is the 1/q coefficient, out[1] = 744, ...).
inline std::vector<Int> j_function_coeffs(long terms) {
  long T = terms + 2;
  // Delta / q = prod (1 - q^m)^24 mod q^T
  std::vector<Int> f(T, Int(0));
  f[0] = 1;
  for (long m = 1; m < T; ++m)
    for (int rep = 0; rep < 24; ++rep)
      for (long i = T - 1; i >= m; --i) f[i] -= f[i - m];
  // E4 = 1 + 240 sum sigma_3(n) q^n
  std::vector<Int> e4(T, Int(0));
  e4[0] = 1;
  for (long n = 1; n < T; ++n) {
    Int s3 = 0;
    for (long d = 1; d <= n; ++d)
      if (n % d == 0) s3 += ipow(d, 3);
    e4[n] = 240 * s3;
  }
  auto mul = [&](const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> c(T, Int(0));
    for (long i = 0; i < T; ++i) {
      if (a[i] == 0) continue;
      for (long j = 0; j + i < T; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  std::vector<Int> e43 = mul(mul(e4, e4), e4);
  // invert f (unit series) by the standard recurrence
  std::vector<Int> finv(T, Int(0));
  finv[0] = 1;
  for (long n = 1; n < T; ++n) {
    Int acc = 0;
    for (long i = 1; i <= n; ++i) acc += f[i] * finv[n - i];
    finv[n] = -acc;
  }
  // j * q = E4^3 * (Delta/q)^{-1}
  std::vector<Int> jq = mul(e43, finv);
  return jq;  // jq[n] = coefficient of q^(n-1) in j
}

}  // namespace detail

/// Coefficients c_1..c_terms of the reversion q_E = sum c_i j^-i of the
/// modular j-function (c_1 = 1, c_2 = 744, c_3 = 750420, ...).
inline std::vector<Int> tate_q_series(long terms) {
  auto jq = detail::j_function_coeffs(terms);
  long T = terms;
  // solve q = w (1 + 744 q + sum_{n>=1} j_n q^{n+1}) iteratively in Z[[w]]
  std::vector<Int> S(T + 1, Int(0));
  S[1] = 1;
  auto mul = [&](const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> c(T + 1, Int(0));
    for (long i = 0; i <= T; ++i) {
      if (a[i] == 0) continue;
      for (long j = 0; i + j <= T; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  for (long iter = 0; iter < T; ++iter) {
    // rhs = 1 + 744 S + sum_n j_n S^{n+1}; jq[n+1] is the coefficient j_n
    std::vector<Int> rhs(T + 1, Int(0));
    rhs[0] = 1;
    std::vector<Int> power = S;
    for (long i = 0; i <= T; ++i) rhs[i] += 744 * power[i];
    for (long n = 1; n + 1 <= T; ++n) {
      power = mul(power, S);  // S^(n+1)
      Int jn = (n + 1 < static_cast<long>(jq.size())) ? jq[n + 1] : Int(0);
      if (jn == 0) continue;
      for (long i = 0; i <= T; ++i) rhs[i] += jn * power[i];
    }
    // S <- w * rhs
    std::vector<Int> next(T + 1, Int(0));
    for (long i = 0; i + 1 <= T; ++i) next[i + 1] = rhs[i];
    if (next == S) break;
    S = std::move(next);
  }
  std::vector<Int> out(S.begin() + 1, S.end());
  return out;
}

/// Tate parameter q_E evaluated from the j-invariant (v_p(j) < 0 required),
/// to absolute precision abs_prec.
inline PadicElement tate_parameter(const Rat& j, long p, long abs_prec) {
  if (j == 0 || rat_valuation(j, p) >= 0)
    throw DomainError("tate_parameter: requires v_p(j) < 0");
  long t = -rat_valuation(j, p);
  // series term i has valuation >= i t; stop once below target + 2 guards
  long T = 1;
  while (T * t < abs_prec + 2) ++T;
  auto c = tate_q_series(T);
  Rat w = Rat(1) / j;
  Rat acc = 0;
  Rat wpow = 1;
  for (long i = 1; i <= T; ++i) {
    wpow *= w;
    acc += Rat(c[i - 1]) * wpow;
  }
  return PadicElement::from_rational(acc, p, abs_prec);
}

/// Mazur-Tate-Teitelbaum L-invariant of a Tate curve:
/// L_E = log_p(q_E) / v_p(q_E) with the Iwasawa branch (log_p p = 0).
/// The result carries at least `digits` absolute digits.
inline PadicElement tate_linvariant(const Rat& j, long p, long digits) {
  if (j == 0 || rat_valuation(j, p) >= 0)
    throw DomainError("tate_linvariant: requires v_p(j) < 0");
  long t = -rat_valuation(j, p);
  long tval = (t % p == 0) ? int_valuation(Int(t), p) : 0;
  long unit_prec = digits + tval + 2;
  PadicElement q = tate_parameter(j, p, unit_prec + t);
  // log_p(q) = log<unit part>: the p-power and Teichmueller parts vanish
  PadicElement lg = log_angle(q.unit_part(), p, unit_prec);
  PadicElement den = PadicElement::from_rational(Rat(t), p, unit_prec);
  return lg / den;
}

}  // namespace linv
