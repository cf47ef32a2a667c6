#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "linv/errors.hpp"
#include "linv/int_poly.hpp"
#include "linv/p1.hpp"
#include "linv/rat_mat.hpp"
#include "linv/rational.hpp"

namespace linv {

/// Weight-k Manin/modular symbol space for Gamma_0(M) over exact rationals.
///
/// Free generators are pairs (P^1 class, monomial X^i Y^(k-2-i)); the stored
/// reduction map rewrites every generator in terms of a basis of the quotient
/// by the 2- and 3-term relations. The full (sign 0) space is always built;
/// star eigenspaces are sliced afterwards.
class SymbolSpace {
 public:
  SymbolSpace(long M, long k) : M_(M), k_(k), p1_(M), nmono_(k - 1) {
    if (k < 2 || k % 2 != 0)
      throw DomainError("SymbolSpace: weight must be even and >= 2");
    build();
  }

  long level() const { return M_; }
  long weight() const { return k_; }
  const P1& p1() const { return p1_; }
  long free_rank() const { return p1_.size() * nmono_; }
  long dim() const { return static_cast<long>(basis_.size()); }
  /// Basis entries as (p1 index, monomial exponent of X).
  const std::vector<std::pair<long, long>>& basis() const { return basis_; }
  const QMat& reduction() const { return reduction_; }

  long free_index(long p1_idx, long mono) const {
    return p1_idx * nmono_ + mono;
  }

  /// Column of the reduction map: the class of a free generator.
  QMat reduce_generator(long p1_idx, long mono) const {
    QMat v(dim(), 1);
    long f = free_index(p1_idx, mono);
    for (long i = 0; i < dim(); ++i) v.at(i, 0) = reduction_.at(i, f);
    return v;
  }

  /// The class of sum_i coeffs[i] * [X^i Y^(k-2-i), class s].
  QMat reduce_poly(const QPoly& coeffs, long p1_idx) const {
    QMat v(dim(), 1);
    for (long i = 0; i < static_cast<long>(coeffs.size()); ++i) {
      if (coeffs[i] == 0) continue;
      long f = free_index(p1_idx, i);
      for (long r = 0; r < dim(); ++r)
        if (reduction_.at(r, f) != 0)
          v.at(r, 0) += coeffs[i] * reduction_.at(r, f);
    }
    return v;
  }

  /// Coefficients of X^i Y^(k-2-i) transformed by h: P |-> P(h . (X,Y)).
  QPoly transform_monomial(long i, const Mat22& h) const {
    // (aX + bY)^i * (cX + dY)^(k-2-i)
    QPoly top{Rat(1)};
    for (long t = 0; t < i; ++t) top = qp_mul(top, QPoly{Rat(h.b), Rat(h.a)});
    QPoly bot{Rat(1)};
    for (long t = 0; t < k_ - 2 - i; ++t)
      bot = qp_mul(bot, QPoly{Rat(h.d), Rat(h.c)});
    QPoly prod = qp_mul(top, bot);
    prod.resize(nmono_, Rat(0));
    return prod;  // index = exponent of X
  }

  /// Modular symbol P tensor {from -> to} expressed in the basis, where the
  /// polynomial is X^i Y^(k-2-i) pre-transformed by `pre`. Paths decompose
  /// into unimodular pieces through continued-fraction convergents.
  QMat path_vector(long mono_i, const Mat22& pre, const Cusp& from,
                   const Cusp& to) const {
    QMat acc(dim(), 1);
    accumulate_full_path(acc, mono_i, pre, to, Rat(1));
    accumulate_full_path(acc, mono_i, pre, from, Rat(-1));
    return acc;
  }

  /// All monomials at once: column i holds the class of
  /// X^i Y^(k-2-i) tensor {from -> to}.
  QMat path_matrix(const Cusp& from, const Cusp& to) const {
    QMat acc(dim(), nmono_);
    Mat22 id{1, 0, 0, 1};
    for (long i = 0; i < nmono_; ++i) {
      QMat col = path_vector(i, id, from, to);
      for (long r = 0; r < dim(); ++r) acc.at(r, i) = col.at(r, 0);
    }
    return acc;
  }

  /// The star involution (induced by z -> -zbar) on the basis.
  QMat star_matrix() const {
    QMat m(dim(), dim());
    for (long b = 0; b < dim(); ++b) {
      auto [s, i] = basis_[b];
      auto [c, d] = p1_.rep(s);
      long s2 = p1_.index_of(Int(-c), Int(d));
      QMat col = reduce_generator(s2, i);
      Rat sign = (i % 2 == 0) ? 1 : -1;
      for (long r = 0; r < dim(); ++r) m.at(r, b) = sign * col.at(r, 0);
    }
    return m;
  }

 private:
  void accumulate_full_path(QMat& acc, long mono_i, const Mat22& pre,
                            const Cusp& target, const Rat& scale) const {
    Cusp t = target.normalized();
    if (t.is_infinity()) return;  // {oo -> oo} contributes nothing
    // convergents p_j/q_j of t, with p_{-1}/q_{-1} = 1/0
    std::vector<Int> ps{Int(1)}, qs{Int(0)};
    {
      Int a = t.x, b = t.y;
      Int p_prev = 1, q_prev = 0;
      Int p_cur, q_cur;
      bool first = true;
      while (b != 0) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Int r = a - q * b;
        if (first) {
          p_cur = q;
          q_cur = 1;
          first = false;
        } else {
          Int pn = q * p_cur + p_prev;
          Int qn = q * q_cur + q_prev;
          p_prev = p_cur;
          q_prev = q_cur;
          p_cur = pn;
          q_cur = qn;
        }
        ps.push_back(p_cur);
        qs.push_back(q_cur);
        a = b;
        b = r;
      }
    }
    // piece j: h = [p_j, s*p_{j-1}; q_j, s*q_{j-1}], s = (-1)^(j-1)
    for (size_t j = 1; j < ps.size(); ++j) {
      int sgn = (j % 2 == 0) ? 1 : -1;  // (-1)^(j-1) with 1-based j here
      Mat22 h{ps[j], Int(sgn) * ps[j - 1], qs[j], Int(sgn) * qs[j - 1]};
      Mat22 full = pre * h;
      QPoly coeffs = transform_monomial(mono_i, full);
      long s_idx = p1_.index_of(h.c, h.d);
      for (long i = 0; i < nmono_; ++i) {
        if (coeffs[i] == 0) continue;
        long f = free_index(s_idx, i);
        for (long r = 0; r < dim(); ++r)
          if (reduction_.at(r, f) != 0)
            acc.at(r, 0) += scale * coeffs[i] * reduction_.at(r, f);
      }
    }
  }

  // --- construction -------------------------------------------------------

  struct Glue {
    long rep = -1;  // representative free index, -1 when the symbol dies
    Rat sign = 0;
  };

  void build() {
    long n1 = p1_.size();
    long F = n1 * nmono_;

    // two-term relations: x + x|sigma = 0 glues generators in pairs.
    // sigma = [0,-1;1,0]: [X^i Y^j, (c:d)] -> (-1)^i [X^j Y^i, (d:-c)].
    std::vector<Glue> glue(F);
    Mat22 sigma{0, -1, 1, 0};
    for (long s = 0; s < n1; ++s) {
      long s2 = p1_.act(s, sigma);
      for (long i = 0; i < nmono_; ++i) {
        long f = free_index(s, i);
        if (glue[f].sign != 0 || glue[f].rep == -2) continue;
        long i2 = k_ - 2 - i;
        long f2 = free_index(s2, i2);
        Rat sgn = (i % 2 == 0) ? Rat(-1) : Rat(1);  // x2 = -(-1)^i x
        if (f2 == f) {
          if (i % 2 == 0) {
            glue[f].rep = -1;  // 2x = 0
            glue[f].sign = 0;
            glue[f].rep = -2;  // dead marker
          } else {
            glue[f].rep = f;
            glue[f].sign = 1;
          }
          continue;
        }
        long rep = std::min(f, f2), other = std::max(f, f2);
        glue[rep].rep = rep;
        glue[rep].sign = 1;
        // x_other in terms of x_rep: from x_f2 = -(-1)^i x_f (i = mono of f)
        if (rep == f) {
          glue[other].rep = rep;
          glue[other].sign = sgn;
        } else {
          // express f in terms of f2: x_f = -(-1)^{i2} x_{f2}
          glue[other].rep = rep;
          glue[other].sign = (i2 % 2 == 0) ? Rat(-1) : Rat(1);
        }
      }
    }

    // representative columns get contiguous ids
    std::vector<long> col_of_free(F, -1);
    std::vector<long> rep_cols;  // free index per column
    for (long f = 0; f < F; ++f) {
      if (glue[f].rep == f) {
        col_of_free[f] = static_cast<long>(rep_cols.size());
        rep_cols.push_back(f);
      }
    }
    long C = static_cast<long>(rep_cols.size());
    auto free_to_col = [&](long f) -> std::pair<long, Rat> {
      if (glue[f].rep == -2 || glue[f].rep == -1) return {-1, Rat(0)};
      return {col_of_free[glue[f].rep], glue[f].sign};
    };

    // three-term relations x + x|tau + x|tau^2 = 0 over representatives.
    // tau = [0,-1;1,-1], tau^2 = [-1,1;-1,0].
    Mat22 tau{0, -1, 1, -1}, tau2{-1, 1, -1, 0};
    std::vector<std::map<long, Rat>> rows;
    rows.reserve(F);
    for (long s = 0; s < n1; ++s) {
      long st = p1_.act(s, tau);
      long st2 = p1_.act(s, tau2);
      for (long i = 0; i < nmono_; ++i) {
        std::map<long, Rat> row;
        auto add = [&](long f, const Rat& v) {
          auto [col, sgn] = free_to_col(f);
          if (col < 0 || v == 0) return;
          Rat add_v = v * sgn;
          auto it = row.find(col);
          if (it == row.end())
            row[col] = add_v;
          else {
            it->second += add_v;
            if (it->second == 0) row.erase(it);
          }
        };
        add(free_index(s, i), Rat(1));
        // x|tau: (X^i Y^j)|tau = (-Y)^i (X - Y)^j at class s*tau
        long j = k_ - 2 - i;
        for (long m = 0; m <= j; ++m) {
          // coefficient of X^m Y^(k-2-m): (-1)^(i + j - m) * binom(j, m)
          Int b;
          mpz_bin_uiui(b.get_mpz_t(), j, m);
          Rat coef = Rat(b);
          if ((i + j - m) % 2 != 0) coef = -coef;
          add(free_index(st, m), coef);
        }
        // x|tau^2: (X^i Y^j)|tau^2 = (Y - X)^i (-X)^j at class s*tau^2;
        // coefficient of X^e Y^(k-2-e) is (-1)^e binom(i, k-2-e)
        for (long e = j; e <= k_ - 2; ++e) {
          Int b;
          mpz_bin_uiui(b.get_mpz_t(), i, k_ - 2 - e);
          Rat coef = Rat(b);
          if (e % 2 != 0) coef = -coef;
          add(free_index(st2, e), coef);
        }
        if (!row.empty()) rows.push_back(std::move(row));
      }
    }

    // sparse reduced echelon elimination over the representative columns
    std::map<long, std::map<long, Rat>> pivot_rows;  // pivot col -> row
    std::vector<std::set<long>> containing(C);       // col -> pivot cols whose rows use it
    for (auto& row : rows) {
      // reduce against existing pivots
      std::vector<long> present;
      for (auto& [c, v] : row)
        if (pivot_rows.count(c)) present.push_back(c);
      for (long c : present) {
        Rat coef = row[c];
        row.erase(c);
        for (auto& [c2, v2] : pivot_rows[c]) {
          if (c2 == c) continue;
          auto it = row.find(c2);
          if (it == row.end())
            row[c2] = -coef * v2;
          else {
            it->second -= coef * v2;
            if (it->second == 0) row.erase(it);
          }
        }
      }
      if (row.empty()) continue;
      // pivot choice: minimal bit-length, then fewest uses, then column order
      long piv = -1;
      std::tuple<size_t, size_t, long> best{0, 0, 0};
      for (auto& [c, v] : row) {
        std::tuple<size_t, size_t, long> score{bit_length(v),
                                               containing[c].size(), c};
        if (piv < 0 || score < best) {
          piv = c;
          best = score;
        }
      }
      Rat pv = row[piv];
      std::map<long, Rat> prow;
      for (auto& [c, v] : row)
        if (c != piv) prow[c] = v / pv;
      // back-substitute into rows that use piv
      std::vector<long> users(containing[piv].begin(), containing[piv].end());
      for (long u : users) {
        auto& urow = pivot_rows[u];
        auto it = urow.find(piv);
        if (it == urow.end()) continue;
        Rat coef = it->second;
        urow.erase(it);
        containing[piv].erase(u);
        for (auto& [c2, v2] : prow) {
          auto jt = urow.find(c2);
          if (jt == urow.end()) {
            urow[c2] = -coef * v2;
            containing[c2].insert(u);
          } else {
            jt->second -= coef * v2;
            if (jt->second == 0) {
              urow.erase(jt);
              containing[c2].erase(u);
            }
          }
        }
      }
      for (auto& [c2, v2] : prow) containing[c2].insert(piv);
      pivot_rows[piv] = std::move(prow);
    }

    // basis: representative columns that are not pivots, in column order
    std::vector<long> basis_col_ids;
    std::vector<long> basis_id_of_col(C, -1);
    for (long c = 0; c < C; ++c) {
      if (pivot_rows.count(c)) continue;
      basis_id_of_col[c] = static_cast<long>(basis_col_ids.size());
      basis_col_ids.push_back(c);
    }
    basis_.clear();
    for (long c : basis_col_ids) {
      long f = rep_cols[c];
      basis_.push_back({f / nmono_, f % nmono_});
    }

    long D = static_cast<long>(basis_.size());
    reduction_ = QMat(D, F);
    for (long f = 0; f < F; ++f) {
      auto [col, sgn] = free_to_col(f);
      if (col < 0) continue;
      if (basis_id_of_col[col] >= 0) {
        reduction_.at(basis_id_of_col[col], f) = sgn;
        continue;
      }
      // pivot column: x_col = -sum coeff * x_other with others basis cols
      for (auto& [c2, v2] : pivot_rows[col]) {
        long b = basis_id_of_col[c2];
        if (b < 0)
          throw ComputationError("SymbolSpace: echelon not fully reduced");
        reduction_.at(b, f) = -sgn * v2;
      }
    }
  }

  long M_, k_;
  P1 p1_;
  long nmono_;
  std::vector<std::pair<long, long>> basis_;
  QMat reduction_;
};

}  // namespace linv
