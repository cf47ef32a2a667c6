#pragma once

#include <array>
#include <map>
#include <vector>

#include "linv/errors.hpp"
#include "linv/rational.hpp"

namespace linv {

/// 2x2 integer matrix [[a, b], [c, d]] acting on column vectors.
struct Mat22 {
  Int a, b, c, d;

  Mat22 adjugate() const { return {d, -b, -c, a}; }
  Int det() const { return a * d - b * c; }

  friend Mat22 operator*(const Mat22& x, const Mat22& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
};

/// The projective line P^1(Z/M), with canonical representatives, index
/// lookup, right action of integer matrices on row classes (c:d), and lifts
/// of classes to SL_2(Z).
class P1 {
 public:
  explicit P1(long M) : M_(M) {
    if (M < 1) throw DomainError("P1: level must be >= 1");
    if (M == 1) {
      reps_.push_back({0, 0});
      index_table_.assign(1, 0);
      return;
    }
    // canonical representative: lexicographically least unit multiple
    std::vector<long> units;
    for (long u = 1; u < M; ++u)
      if (std::gcd(u, M) == 1) units.push_back(u);
    index_table_.assign(M * M, -1);
    for (long c = 0; c < M; ++c)
      for (long d = 0; d < M; ++d) {
        if (std::gcd(std::gcd(c, d), M) != 1) continue;
        if (index_table_[c * M + d] != -1) continue;
        std::pair<long, long> best{M, M};
        for (long u : units)
          best = std::min(best, {(u * c) % M, (u * d) % M});
        long idx;
        auto it = rep_index_.find(best);
        if (it == rep_index_.end()) {
          idx = static_cast<long>(reps_.size());
          reps_.push_back(best);
          rep_index_[best] = idx;
        } else {
          idx = it->second;
        }
        for (long u : units)
          index_table_[((u * c) % M) * M + (u * d) % M] = idx;
      }
  }

  long level() const { return M_; }
  long size() const { return static_cast<long>(reps_.size()); }
  std::pair<long, long> rep(long idx) const { return reps_[idx]; }

  long index_of(const Int& c, const Int& d) const {
    if (M_ == 1) return 0;
    long cr = imod(c, Int(M_)).get_si();
    long dr = imod(d, Int(M_)).get_si();
    long idx = index_table_[cr * M_ + dr];
    if (idx < 0) throw DomainError("P1: non-primitive pair");
    return idx;
  }

  /// Right action (c:d) |-> (c:d) * h on row classes.
  long act(long idx, const Mat22& h) const {
    auto [c, d] = reps_[idx];
    Int nc = Int(c) * h.a + Int(d) * h.c;
    Int nd = Int(c) * h.b + Int(d) * h.d;
    return index_of(nc, nd);
  }

  /// A matrix in SL_2(Z) whose bottom row is congruent to the class mod M.
  Mat22 lift(long idx) const {
    if (M_ == 1) return {1, 0, 0, 1};
    auto [c, d] = reps_[idx];
    // adjust d by multiples of M until gcd(c, d) = 1
    long c0 = c, d0 = d;
    if (c0 == 0) {
      // canonical rep is (0, 1)
      return {1, 0, 0, 1};
    }
    for (long t = 0;; ++t) {
      if (std::gcd(c0, d0 + t * M_) == 1) {
        d0 = d0 + t * M_;
        break;
      }
      if (std::gcd(c0, d0 - (t + 1) * M_) == 1) {
        d0 = d0 - (t + 1) * M_;
        break;
      }
    }
    // complete (c0, d0) to [[a, b], [c0, d0]] of determinant one
    Int g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(),
               Int(d0).get_mpz_t(), Int(c0).get_mpz_t());
    if (g != 1) throw ComputationError("P1::lift: completion failed");
    // x*d0 + y*c0 = 1 -> det [[x, -y],[c0, d0]] = x d0 + y c0 = 1
    return {x, -y, Int(c0), Int(d0)};
  }

 private:
  long M_;
  std::vector<std::pair<long, long>> reps_;
  std::map<std::pair<long, long>, long> rep_index_;
  std::vector<long> index_table_;
};

/// Rational cusp x/y, with y = 0 denoting infinity.
struct Cusp {
  Int x, y;

  static Cusp infinity() { return {1, 0}; }
  bool is_infinity() const { return y == 0; }

  /// Reduced form with canonical sign (y > 0, or (1, 0)).
  Cusp normalized() const {
    if (y == 0) return {1, 0};
    Int g = igcd(x, y);
    Int nx = x / g, ny = y / g;
    if (ny < 0) {
      nx = -nx;
      ny = -ny;
    }
    return {nx, ny};
  }

  bool operator==(const Cusp& o) const {
    Cusp a = normalized(), b = o.normalized();
    return a.x == b.x && a.y == b.y;
  }
  bool operator<(const Cusp& o) const {
    Cusp a = normalized(), b = o.normalized();
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  }
};

/// Gamma_0(M)-equivalence of cusps.
inline bool cusp_equivalent(long M, const Cusp& s1, const Cusp& s2) {
  Cusp a = s1.normalized(), b = s2.normalized();
  // complete (x, y) to [[x, u],[y, v]] in SL_2(Z); cusp = first column / ...
  auto complete = [](const Cusp& s) -> std::pair<Int, Int> {
    // returns (y, v) with x*v - u*y = 1 for some u
    Int g, u, v;
    mpz_gcdext(g.get_mpz_t(), v.get_mpz_t(), u.get_mpz_t(),
               s.x.get_mpz_t(), s.y.get_mpz_t());
    // v*x + u*y = 1 -> det [[x, -u],[y, v]] = x v + u y = 1
    return {s.y, v};
  };
  auto [c1, v1] = complete(a);
  auto [c2, v2] = complete(b);
  // equivalent iff gcd(c1 c2, M) divides c2 v1 - v2 c1
  Int g = igcd(imod(c1 * c2, Int(M)), Int(M));
  return imod(c2 * v1 - v2 * c1, g) == 0;
}

}  // namespace linv
