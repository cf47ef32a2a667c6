#pragma once

// Independent oracles used by the test suites. These deliberately avoid the
// library's modular-symbol machinery: dimensions come from the classical
// formulas, Hecke eigenvalues from q-expansions or point counts.

#include <numeric>
#include <vector>

#include "linv/rational.hpp"

namespace oracles {

using linv::Int;

inline long idx_gamma0(long N) {
  long mu = N;
  long m = N;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    mu = mu / p * (p + 1);
    while (m % p == 0) m /= p;
  }
  if (m > 1) mu = mu / m * (m + 1);
  return mu;
}

inline long nu2_gamma0(long N) {
  if (N % 4 == 0) return 0;
  long r = 1;
  long m = N;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    r *= (p == 2) ? 1 : (1 + linv::kronecker(-1, p));
    while (m % p == 0) m /= p;
  }
  if (m > 1) r *= (m == 2) ? 1 : 1 + linv::kronecker(-1, m);
  return r;
}

inline long nu3_gamma0(long N) {
  if (N % 9 == 0) return 0;
  long r = 1;
  long m = N;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    r *= (p == 3) ? 1 : (1 + linv::kronecker(-3, p));
    while (m % p == 0) m /= p;
  }
  if (m > 1) r *= 1 + linv::kronecker(-3, m);
  return r;
}

inline long ncusps_gamma0(long N) {
  long total = 0;
  for (long d = 1; d <= N; ++d) {
    if (N % d) continue;
    long g = std::gcd(d, N / d);
    long phi = 0;
    for (long a = 1; a <= g; ++a)
      if (std::gcd(a, g) == 1) ++phi;
    total += phi;
  }
  return total;
}

inline long genus_gamma0(long N) {
  // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 cusps
  long twelve_g = 12 + idx_gamma0(N) - 3 * nu2_gamma0(N) - 4 * nu3_gamma0(N) -
                  6 * ncusps_gamma0(N);
  return twelve_g / 12;
}

/// dim S_k(Gamma_0(N)) for even k >= 2 (classical dimension formula).
inline long dim_cuspforms(long N, long k) {
  if (k < 2 || k % 2) return 0;
  long g = genus_gamma0(N);
  if (k == 2) return g;
  return (k - 1) * (g - 1) + (k / 2 - 1) * ncusps_gamma0(N) +
         nu2_gamma0(N) * (k / 4) + nu3_gamma0(N) * (k / 3);
}

/// dim of the p-new subspace of S_k(Gamma_0(Np)), p coprime to N.
inline long dim_p_new(long N, long p, long k) {
  return dim_cuspforms(N * p, k) - 2 * dim_cuspforms(N, k);
}

/// Ramanujan tau: Hecke eigenvalue a_n of the unique level-one cusp form of
/// weight 12, read off the q-expansion of Delta = q prod (1 - q^m)^24.
inline Int tau(long n) {
  std::vector<Int> f(n, Int(0));  // prod (1-q^m)^24 mod q^n
  f[0] = 1;
  for (long m = 1; m < n; ++m)
    for (int rep = 0; rep < 24; ++rep)
      for (long i = n - 1; i >= m; --i) f[i] -= f[i - m];
  return f[n - 1];  // Delta = q * f
}

/// a_p of the elliptic curve y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
/// by counting points over F_p.
inline long curve_ap(long a1, long a2, long a3, long a4, long a6, long p) {
  long count = 1;  // point at infinity
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) {
      long lhs = (y * y + a1 * x * y + a3 * y) % p;
      long rhs = (((x * x % p) * x) % p + a2 * x * x + a4 * x + a6) % p;
      if (((lhs - rhs) % p + p) % p == 0) ++count;
    }
  return p + 1 - count;
}

}  // namespace oracles
