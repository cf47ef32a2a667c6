#pragma once

#include <algorithm>
#include <vector>

#include "linv/errors.hpp"
#include "linv/int_poly.hpp"
#include "linv/rational.hpp"

namespace linv {

/// Dense exact-rational matrix. No rounding anywhere; pivots favor small
/// bit-length for speed and determinism.
class QMat {
 public:
  QMat() : r_(0), c_(0) {}
  QMat(long rows, long cols) : r_(rows), c_(cols), a_(rows * cols, Rat(0)) {}

  static QMat identity(long n) {
    QMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  long rows() const { return r_; }
  long cols() const { return c_; }
  Rat& at(long i, long j) { return a_[i * c_ + j]; }
  const Rat& at(long i, long j) const { return a_[i * c_ + j]; }

  bool operator==(const QMat& o) const {
    return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
  }

  QMat transpose() const {
    QMat t(c_, r_);
    for (long i = 0; i < r_; ++i)
      for (long j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend QMat operator*(const QMat& a, const QMat& b) {
    if (a.c_ != b.r_) throw DomainError("QMat: dimension mismatch");
    QMat m(a.r_, b.c_);
    for (long i = 0; i < a.r_; ++i)
      for (long k = 0; k < a.c_; ++k) {
        const Rat& v = a.at(i, k);
        if (v == 0) continue;
        for (long j = 0; j < b.c_; ++j)
          if (b.at(k, j) != 0) m.at(i, j) += v * b.at(k, j);
      }
    return m;
  }

  friend QMat operator+(const QMat& a, const QMat& b) {
    QMat m(a.r_, a.c_);
    for (size_t i = 0; i < a.a_.size(); ++i) m.a_[i] = a.a_[i] + b.a_[i];
    return m;
  }

  friend QMat operator-(const QMat& a, const QMat& b) {
    QMat m(a.r_, a.c_);
    for (size_t i = 0; i < a.a_.size(); ++i) m.a_[i] = a.a_[i] - b.a_[i];
    return m;
  }

  QMat scaled(const Rat& s) const {
    QMat m(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] * s;
    return m;
  }

  bool is_zero() const {
    for (const auto& v : a_)
      if (v != 0) return false;
    return true;
  }

  bool is_scalar(const Rat& s) const {
    if (r_ != c_) return false;
    for (long i = 0; i < r_; ++i)
      for (long j = 0; j < c_; ++j)
        if (at(i, j) != (i == j ? s : Rat(0))) return false;
    return true;
  }

  /// In-place reduced row echelon form; returns pivot column indices.
  std::vector<long> rref() {
    std::vector<long> pivots;
    long row = 0;
    for (long col = 0; col < c_ && row < r_; ++col) {
      long best = -1;
      size_t best_bits = 0;
      for (long i = row; i < r_; ++i) {
        if (at(i, col) == 0) continue;
        size_t bits = bit_length(at(i, col));
        if (best < 0 || bits < best_bits) {
          best = i;
          best_bits = bits;
        }
      }
      if (best < 0) continue;
      if (best != row)
        for (long j = 0; j < c_; ++j) std::swap(at(best, j), at(row, j));
      Rat inv = Rat(1) / at(row, col);
      for (long j = col; j < c_; ++j)
        if (at(row, j) != 0) at(row, j) *= inv;
      for (long i = 0; i < r_; ++i) {
        if (i == row || at(i, col) == 0) continue;
        Rat f = at(i, col);
        for (long j = col; j < c_; ++j)
          if (at(row, j) != 0) at(i, j) -= f * at(row, j);
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  long rank() const {
    QMat m = *this;
    return static_cast<long>(m.rref().size());
  }

  /// Columns spanning the right kernel.
  QMat kernel() const {
    QMat m = *this;
    auto pivots = m.rref();
    std::vector<bool> is_pivot(c_, false);
    for (long p : pivots) is_pivot[p] = true;
    std::vector<long> free_cols;
    for (long j = 0; j < c_; ++j)
      if (!is_pivot[j]) free_cols.push_back(j);
    QMat k(c_, static_cast<long>(free_cols.size()));
    for (size_t fi = 0; fi < free_cols.size(); ++fi) {
      long fc = free_cols[fi];
      k.at(fc, fi) = 1;
      for (size_t pi = 0; pi < pivots.size(); ++pi)
        k.at(pivots[pi], fi) = -m.at(static_cast<long>(pi), fc);
    }
    return k;
  }

  /// Solve A x = b (single column); throws when inconsistent.
  QMat solve(const QMat& b) const {
    QMat aug(r_, c_ + b.cols());
    for (long i = 0; i < r_; ++i) {
      for (long j = 0; j < c_; ++j) aug.at(i, j) = at(i, j);
      for (long j = 0; j < b.cols(); ++j) aug.at(i, c_ + j) = b.at(i, j);
    }
    auto pivots = aug.rref();
    QMat x(c_, b.cols());
    for (size_t pi = 0; pi < pivots.size(); ++pi) {
      if (pivots[pi] >= c_) throw ComputationError("QMat::solve: inconsistent");
      for (long j = 0; j < b.cols(); ++j)
        x.at(pivots[pi], j) = aug.at(static_cast<long>(pi), c_ + j);
    }
    // verify (guards against underdetermined systems picking a non-solution)
    QMat check = (*this) * x;
    for (long i = 0; i < r_; ++i)
      for (long j = 0; j < b.cols(); ++j)
        if (check.at(i, j) != b.at(i, j))
          throw ComputationError("QMat::solve: inconsistent system");
    return x;
  }

  QMat inverse() const {
    if (r_ != c_) throw DomainError("QMat::inverse: not square");
    return solve(identity(r_));
  }

  /// Horizontal stack of rows from two matrices with equal column count.
  static QMat vstack(const QMat& a, const QMat& b) {
    if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
      throw DomainError("QMat::vstack: column mismatch");
    long cols = a.rows() ? a.cols() : b.cols();
    QMat m(a.rows() + b.rows(), cols);
    for (long i = 0; i < a.rows(); ++i)
      for (long j = 0; j < cols; ++j) m.at(i, j) = a.at(i, j);
    for (long i = 0; i < b.rows(); ++i)
      for (long j = 0; j < cols; ++j) m.at(a.rows() + i, j) = b.at(i, j);
    return m;
  }

  QMat columns(const std::vector<long>& idx) const {
    QMat m(r_, static_cast<long>(idx.size()));
    for (long i = 0; i < r_; ++i)
      for (size_t j = 0; j < idx.size(); ++j) m.at(i, j) = at(i, idx[j]);
    return m;
  }

 private:
  long r_, c_;
  std::vector<Rat> a_;
};

namespace detail {

/// Characteristic polynomial mod a word prime via Hessenberg reduction
/// (Cohen, Alg. 2.2.9). Returns coefficients of a monic polynomial.
inline std::vector<long> charpoly_mod(const std::vector<Int>& a, long n,
                                      long q) {
  std::vector<long> h(n * n);
  for (long i = 0; i < n * n; ++i) h[i] = imod(a[i], Int(q)).get_si();
  auto at = [&](long i, long j) -> long& { return h[i * n + j]; };
  auto inv = [&](long x) { return mod_inverse(Int(x), Int(q)).get_si(); };

  for (long m = 1; m + 1 < n + 0; ++m) {
    // find pivot in column m-1 below row m
    long piv = -1;
    for (long i = m; i < n; ++i)
      if (at(i, m - 1) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != m) {
      for (long j = 0; j < n; ++j) std::swap(at(piv, j), at(m, j));
      for (long i = 0; i < n; ++i) std::swap(at(i, piv), at(i, m));
    }
    long pinv = inv(at(m, m - 1));
    for (long i = m + 1; i < n; ++i) {
      if (at(i, m - 1) == 0) continue;
      long u = (at(i, m - 1) * pinv) % q;
      for (long j = 0; j < n; ++j)
        at(i, j) = ((at(i, j) - u * at(m, j)) % q + q) % q;
      for (long j = 0; j < n; ++j) at(j, m) = (at(j, m) + u * at(j, i)) % q;
    }
  }
  // char polys of leading principal Hessenberg blocks
  std::vector<std::vector<long>> f(n + 1);
  f[0] = {1};
  for (long m = 1; m <= n; ++m) {
    // f_m = (x - h[m-1][m-1]) f_{m-1} - sum_i h[i-1][m-1] (prod b_j) f_{i-1}
    std::vector<long> fm(f[m - 1].size() + 1, 0);
    for (size_t i = 0; i < f[m - 1].size(); ++i) {
      fm[i + 1] = (fm[i + 1] + f[m - 1][i]) % q;
      fm[i] = ((fm[i] - at(m - 1, m - 1) * f[m - 1][i]) % q + q) % q;
    }
    long prod = 1;
    for (long i = m - 1; i >= 1; --i) {
      prod = (prod * at(i, i - 1)) % q;
      long coef = (at(i - 1, m - 1) * prod) % q;
      if (coef != 0)
        for (size_t j = 0; j < f[i - 1].size(); ++j)
          fm[j] = ((fm[j] - coef * f[i - 1][j]) % q + q) % q;
    }
    f[m] = std::move(fm);
  }
  return f[n];
}

}  // namespace detail

/// Characteristic polynomial of an integer matrix, exact, via CRT over
/// word-size primes with a Hadamard-style coefficient bound.
inline ZPoly charpoly_int(const std::vector<Int>& a, long n) {
  if (n == 0) return {Int(1)};
  Int maxabs = 1;
  for (const auto& v : a) maxabs = std::max(maxabs, Int(abs(v)));
  // |coeff| <= binom(n,k) (sqrt(n) B)^k <= (2 sqrt(n) B)^n; pad generously.
  Int bound = ipow(2 * (Int(n) + 1) * (maxabs + 1), static_cast<unsigned long>(n));
  bound *= 4;

  std::vector<long> primes;
  Int prod = 1;
  long q = (1L << 30);
  while (prod <= 2 * bound) {
    q = next_prime(q);
    primes.push_back(q);
    prod *= q;
  }
  ZPoly result(n + 1, Int(0));
  Int mod_acc = 1;
  for (long qi : primes) {
    auto cp = detail::charpoly_mod(a, n, qi);
    if (mod_acc == 1) {
      for (long i = 0; i <= n; ++i) result[i] = cp[i];
      mod_acc = qi;
      continue;
    }
    // CRT combine
    Int inv = mod_inverse(imod(mod_acc, Int(qi)), Int(qi));
    for (long i = 0; i <= n; ++i) {
      Int diff = imod(Int(cp[i]) - result[i], Int(qi));
      result[i] = result[i] + mod_acc * imod(diff * inv, Int(qi));
    }
    mod_acc *= qi;
  }
  // balance into (-prod/2, prod/2]
  Int half = mod_acc / 2;
  for (long i = 0; i <= n; ++i) {
    result[i] = imod(result[i], mod_acc);
    if (result[i] > half) result[i] -= mod_acc;
  }
  return result;
}

/// Characteristic polynomial of a rational matrix (monic, rational coeffs).
inline QPoly charpoly(const QMat& m) {
  if (m.rows() != m.cols()) throw DomainError("charpoly: not square");
  long n = m.rows();
  if (n == 0) return {Rat(1)};
  Int den = 1;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) den = ilcm(den, m.at(i, j).get_den());
  std::vector<Int> a(n * n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      Rat v = m.at(i, j) * Rat(den);
      a[i * n + j] = v.get_num();
    }
  ZPoly cp = charpoly_int(a, n);  // charpoly of den * M
  // char_M(x) = den^-n char_{den M}(den x), so coeff i picks up den^(i-n)
  QPoly out(n + 1);
  Int dpow = 1;
  for (long i = n; i >= 0; --i) {
    out[i] = Rat(cp[i]) / Rat(dpow);
    out[i].canonicalize();
    dpow *= den;
  }
  return out;
}

}  // namespace linv
