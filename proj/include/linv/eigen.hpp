#pragma once

#include <map>
#include <memory>
#include <vector>

#include "linv/hecke.hpp"
#include "linv/local_field.hpp"
#include "linv/qp_factor.hpp"
#include "linv/rat_mat.hpp"

namespace linv {

/// One Hecke-simple summand of the cuspidal p-new subspace at a fixed star
/// parity. The generator operator has irreducible characteristic polynomial
/// on the summand (the simplicity witness).
struct EigenComponent {
  long level = 0, weight = 0, p = 0;
  int eps = 0;  // star parity of this copy
  Subspace A;
  long dim = 0;

  long generator_q = 0;    // T_q, or q = 0 for a combination (see gen_combo)
  std::vector<std::pair<long, long>> gen_combo;  // (coeff, ell) summands
  QMat gen_on_A;           // the generator restricted to A
  ZPoly gen_charpoly;      // monic, irreducible over Q
  bool gen_sqfree_mod_p = false;

  int ap_sign = 0, w_sign = 0;
  std::map<long, QPoly> charpoly_store;  // ell -> charpoly of T_ell on A

  std::string charpoly_key() const {
    std::string s;
    for (const auto& c : gen_charpoly) s += c.get_str() + ",";
    return s;
  }
};

namespace detail {

inline QMat eval_poly_matrix(const QPoly& f, const QMat& T) {
  long n = T.rows();
  QMat acc(n, n);
  for (size_t i = f.size(); i-- > 0;) {
    acc = acc * T;
    for (long d = 0; d < n; ++d) acc.at(d, d) += f[i];
  }
  return acc;
}

inline ZPoly integral_charpoly(const QMat& T) {
  QPoly cp = charpoly(T);
  if (!qp_is_integral(cp))
    throw ComputationError("charpoly of Hecke action not integral");
  return zp_from_q(cp);
}

}  // namespace detail

/// Hecke eigenvalue data: express T_ell on A as a polynomial in the
/// generator, h with T_ell = h(gen). Exists because the generator has
/// irreducible charpoly (its commutant is Q[gen]).
inline QPoly hecke_as_generator_poly(const EigenComponent& A, const QMat& Tl) {
  long d = A.dim;
  QMat sys(d * d, d);
  QMat pw = QMat::identity(d);
  for (long j = 0; j < d; ++j) {
    for (long r = 0; r < d; ++r)
      for (long c = 0; c < d; ++c) sys.at(r * d + c, j) = pw.at(r, c);
    pw = pw * A.gen_on_A;
  }
  QMat rhs(d * d, 1);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) rhs.at(r * d + c, 0) = Tl.at(r, c);
  QMat sol = sys.solve(rhs);
  QPoly h(d);
  for (long j = 0; j < d; ++j) h[j] = sol.at(j, 0);
  qp_trim(h);
  return h;
}

/// Decompose a star slice of the cuspidal p-new subspace into Hecke-simple
/// components. Deterministic order (by generator charpoly, coefficientwise).
inline std::vector<EigenComponent> decompose(SpaceContext& ctx, long p,
                                             int eps, long hecke_bound = 100) {
  const Subspace& N = ctx.cuspidal_new_subspace(p);
  Subspace W = ctx.star_slice(N, eps);
  std::vector<EigenComponent> out;
  if (W.dim() == 0) return out;

  struct Piece {
    Subspace sub;
    long next_ell;
  };
  std::vector<Piece> queue{{W, 2}};
  std::vector<Subspace> simple;
  std::vector<std::pair<long, ZPoly>> witness;  // (q, charpoly)

  auto next_prime_not_dividing = [&](long ell) {
    do {
      ell = next_prime(ell);
    } while (ctx.level() % ell == 0);
    return ell;
  };

  while (!queue.empty()) {
    Piece piece = std::move(queue.back());
    queue.pop_back();
    long ell = piece.next_ell;
    while (ctx.level() % ell == 0) ell = next_prime(ell);
    bool split_done = false;
    while (ell <= hecke_bound) {
      QMat Tl = restrict_operator(ctx.hecke_matrix(ell), piece.sub);
      auto fac = qp_factor_monic(charpoly(Tl));
      if (fac.size() == 1 && fac[0].second == 1) {
        // irreducible charpoly: simple, witnessed by ell
        simple.push_back(piece.sub);
        witness.push_back({ell, zp_from_q(fac[0].first)});
        split_done = true;
        break;
      }
      if (fac.size() > 1) {
        // split into primary kernels and recurse
        for (auto& [g, m] : fac) {
          QPoly gm{Rat(1)};
          for (long i = 0; i < m; ++i) gm = qp_mul(gm, g);
          QMat K = detail::eval_poly_matrix(gm, Tl).kernel();
          Subspace sub = make_subspace(piece.sub.basis * K);
          if (m == 1 && sub.dim() == qp_degree(g)) {
            simple.push_back(sub);
            witness.push_back({ell, zp_from_q(g)});
          } else {
            queue.push_back({sub, next_prime_not_dividing(ell)});
          }
        }
        split_done = true;
        break;
      }
      // single factor with multiplicity > 1: this operator cannot split
      ell = next_prime_not_dividing(ell);
    }
    if (!split_done)
      throw ComputationError(
          "decompose: no Hecke operator below the search bound separates a "
          "component");
  }

  // assemble components with signs and generator data
  for (size_t i = 0; i < simple.size(); ++i) {
    EigenComponent comp;
    comp.level = ctx.level();
    comp.weight = ctx.weight();
    comp.p = p;
    comp.eps = eps;
    comp.A = simple[i];
    comp.dim = simple[i].dim();
    comp.generator_q = witness[i].first;
    comp.gen_on_A = restrict_operator(ctx.hecke_matrix(witness[i].first),
                                      comp.A);
    comp.gen_charpoly = witness[i].second;
    comp.gen_sqfree_mod_p =
        fp_is_squarefree(fp_from_int_poly(comp.gen_charpoly, p));

    // signs: U_p = ap_sign * p^(k/2-1), w = Atkin-Lehner eigenvalue
    QMat U = restrict_operator(ctx.hecke_matrix(p), comp.A);
    Rat upval(ipow(p, static_cast<unsigned long>(comp.weight / 2 - 1)));
    if (U.is_scalar(upval))
      comp.ap_sign = 1;
    else if (U.is_scalar(-upval))
      comp.ap_sign = -1;
    else
      throw ComputationError("signs: U_p not scalar +-p^(k/2-1) on component");
    QMat Wm = restrict_operator(ctx.atkin_lehner_matrix(), comp.A);
    if (Wm.is_scalar(Rat(1)))
      comp.w_sign = 1;
    else if (Wm.is_scalar(Rat(-1)))
      comp.w_sign = -1;
    else
      throw ComputationError("signs: Atkin-Lehner not scalar on component");

    comp.charpoly_store[comp.generator_q] = qp_from_z(comp.gen_charpoly);
    out.push_back(std::move(comp));
  }

  std::sort(out.begin(), out.end(),
            [](const EigenComponent& a, const EigenComponent& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              if (a.generator_q != b.generator_q)
                return a.generator_q < b.generator_q;
              for (size_t i = a.gen_charpoly.size(); i-- > 0;)
                if (a.gen_charpoly[i] != b.gen_charpoly[i])
                  return a.gen_charpoly[i] < b.gen_charpoly[i];
              return false;
            });
  return out;
}

/// Cache Hecke charpolys on a component for ell <= bound, ell coprime to the
/// level (used by residual clustering and cross-parity matching).
inline void fill_charpoly_store(SpaceContext& ctx, EigenComponent& comp,
                                long bound) {
  for (long ell = 2; ell <= bound; ell = next_prime(ell)) {
    if (ctx.level() % ell == 0) continue;
    if (comp.charpoly_store.count(ell)) continue;
    QMat Tl = restrict_operator(ctx.hecke_matrix(ell), comp.A);
    comp.charpoly_store[ell] = charpoly(Tl);
  }
}

/// A p-adic eigenpacket: one prime p | p of the Hecke field, realized as an
/// eigen-covector of the transposed Hecke action with values in K_p. The
/// covector spans the unique line with the component's eigensystem and star
/// parity, so pairing against path vectors computes the modular symbol.
struct EigenPacket {
  const EigenComponent* comp = nullptr;
  std::shared_ptr<const LocalField> K;
  std::vector<LocalFieldElement> covector;  // length = ambient dimension
  std::optional<LocalFieldElement> a_root;  // generator eigenvalue in K
  long multiplicity = 0;
  long prec = 0;
  Rat nu;                         // min valuation over generator values
  std::map<long, QPoly> hpolys;   // ell -> h with T_ell = h(gen) on A

  /// Hecke eigenvalue a_ell as an element of K_p (h_ell must be prepared).
  LocalFieldElement a_ell(long ell) const {
    auto it = hpolys.find(ell);
    if (it == hpolys.end())
      throw ComputationError("a_ell: polynomial not prepared");
    return evaluate_poly(it->second, *a_root);
  }

  /// Pair the covector against a rational column vector.
  LocalFieldElement pair(const QMat& col) const {
    LocalFieldElement acc = K->zero();
    for (long i = 0; i < static_cast<long>(covector.size()); ++i) {
      const Rat& c = col.at(i, 0);
      if (c == 0) continue;
      acc = acc + covector[i].scaled(c);
    }
    return acc;
  }
};

namespace detail {

using KVec = std::vector<LocalFieldElement>;

/// Right kernel of an m x n matrix over K, columns as KVecs.
inline std::vector<KVec> kernel_K(std::vector<KVec> rows, long ncols,
                                  const std::shared_ptr<const LocalField>& K) {
  long m = static_cast<long>(rows.size());
  std::vector<long> pivot_col;
  long rank = 0;
  for (long col = 0; col < ncols && rank < m; ++col) {
    long best = -1, bestval = 0;
    for (long r = rank; r < m; ++r) {
      if (rows[r][col].is_certified_zero()) continue;
      long v = rows[r][col].coeff_valuation();
      if (best < 0 || v < bestval) {
        best = r;
        bestval = v;
      }
    }
    if (best < 0) continue;
    std::swap(rows[rank], rows[best]);
    LocalFieldElement inv = rows[rank][col].inverse();
    for (long j = col; j < ncols; ++j) rows[rank][j] = rows[rank][j] * inv;
    for (long r = 0; r < m; ++r) {
      if (r == rank || rows[r][col].is_certified_zero()) continue;
      LocalFieldElement f = rows[r][col];
      for (long j = col; j < ncols; ++j)
        rows[r][j] = rows[r][j] - f * rows[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_piv(ncols, false);
  for (long c : pivot_col) is_piv[c] = true;
  std::vector<KVec> basis;
  for (long fc = 0; fc < ncols; ++fc) {
    if (is_piv[fc]) continue;
    KVec v(ncols, K->zero());
    v[fc] = K->one();
    for (long r = 0; r < rank; ++r) v[pivot_col[r]] = -rows[r][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace detail

/// The generator as an operator on the ambient space (single Hecke operator
/// or an integer combination).
inline QMat combined_generator_matrix(SpaceContext& ctx,
                                      const EigenComponent& comp) {
  if (comp.generator_q != 0) return ctx.hecke_matrix(comp.generator_q);
  QMat acc(ctx.dim(), ctx.dim());
  for (auto [c, ell] : comp.gen_combo)
    acc = acc + ctx.hecke_matrix(ell).scaled(Rat(c));
  return acc;
}

/// Construct the eigenpackets of a component at precision `prec`: one packet
/// per prime of the Hecke field above p, via Hensel factorization of the
/// generator charpoly over Q_p.
inline std::vector<EigenPacket> eigenpackets(SpaceContext& ctx,
                                             const EigenComponent& comp,
                                             long prec) {
  long p = comp.p;
  long D = ctx.dim();
  auto infos = qp_factor(comp.gen_charpoly, p, prec);

  // rational pre-refinement: covectors with the right star parity and the
  // scalar U_p, w eigenvalues
  QMat stack(0, 0);
  {
    QMat st = ctx.star_matrix().transpose();
    for (long i = 0; i < D; ++i) st.at(i, i) -= comp.eps;
    QMat up = ctx.hecke_matrix(p).transpose();
    Rat upval = Rat(comp.ap_sign) *
                Rat(ipow(p, static_cast<unsigned long>(comp.weight / 2 - 1)));
    for (long i = 0; i < D; ++i) up.at(i, i) -= upval;
    QMat wm = ctx.atkin_lehner_matrix().transpose();
    for (long i = 0; i < D; ++i) wm.at(i, i) -= comp.w_sign;
    stack = QMat::vstack(QMat::vstack(st, up), wm);
  }
  QMat pre = stack.kernel();  // D x r

  std::vector<EigenPacket> out;
  for (const auto& info : infos) {
    auto K = LocalField::from_factor(info, p);
    // root of the generator charpoly: a_shift + p^a_scale * (leaf generator)
    LocalFieldElement a_gen =
        K->from_rational(Rat(info.a_shift)) +
        K->gen().scaled(PadicElement::from_int(
            ipow(p, static_cast<unsigned long>(info.a_scale)), p,
            info.prec + info.a_scale + 1));

    // impose conditions T^t v = a v over K, starting from the rational basis
    std::vector<detail::KVec> basis;
    for (long j = 0; j < pre.cols(); ++j) {
      detail::KVec v;
      v.reserve(D);
      for (long i = 0; i < D; ++i) v.push_back(K->from_rational(pre.at(i, j)));
      basis.push_back(std::move(v));
    }

    EigenPacket pkt;
    pkt.comp = &comp;
    pkt.K = K;
    pkt.a_root = a_gen;
    pkt.multiplicity = info.degree();
    pkt.prec = info.prec;
    pkt.hpolys[comp.generator_q] = QPoly{Rat(0), Rat(1)};

    auto impose = [&](const QMat& op_t, const LocalFieldElement& eigenvalue) {
      // rows r_j = (op_t - eigenvalue) applied to basis vector j
      long s = static_cast<long>(basis.size());
      std::vector<detail::KVec> rows(D, detail::KVec());
      // build columns per basis vector, then transpose into rows
      std::vector<detail::KVec> cols;
      for (long j = 0; j < s; ++j) {
        detail::KVec w(D, K->zero());
        for (long i = 0; i < D; ++i) {
          LocalFieldElement acc = K->zero();
          for (long t = 0; t < D; ++t) {
            const Rat& c = op_t.at(i, t);
            if (c == 0) continue;
            acc = acc + basis[j][t].scaled(c);
          }
          w[i] = acc - eigenvalue * basis[j][i];
        }
        cols.push_back(std::move(w));
      }
      for (long i = 0; i < D; ++i) {
        detail::KVec row(s, K->zero());
        for (long j = 0; j < s; ++j) row[j] = cols[j][i];
        rows[i] = std::move(row);
      }
      auto combos = detail::kernel_K(std::move(rows), s, K);
      std::vector<detail::KVec> nb;
      for (const auto& t : combos) {
        detail::KVec v(D, K->zero());
        for (long j = 0; j < s; ++j)
          for (long i = 0; i < D; ++i) v[i] = v[i] + basis[j][i] * t[j];
        nb.push_back(std::move(v));
      }
      basis = std::move(nb);
    };

    QMat gen_t = combined_generator_matrix(ctx, comp).transpose();
    impose(gen_t, a_gen);

    long ell = 2;
    while (basis.size() > 1) {
      while (ctx.level() % ell == 0 || ell == comp.generator_q)
        ell = next_prime(ell);
      if (ell > 200)
        throw ComputationError("eigenpackets: eigenline isolation failed");
      QMat Tl = restrict_operator(ctx.hecke_matrix(ell), comp.A);
      QPoly h = hecke_as_generator_poly(comp, Tl);
      pkt.hpolys[ell] = h;
      impose(ctx.hecke_matrix(ell).transpose(), evaluate_poly(h, a_gen));
      ell = next_prime(ell);
    }
    if (basis.empty())
      throw PrecisionError("eigenpackets: eigenline lost at working precision");

    // deterministic scaling: first non-(certified-)zero coordinate to 1
    detail::KVec v = basis[0];
    long lead = -1;
    for (long i = 0; i < D; ++i)
      if (!v[i].is_certified_zero()) {
        lead = i;
        break;
      }
    if (lead < 0)
      throw PrecisionError("eigenpackets: covector indistinguishable from 0");
    LocalFieldElement inv = v[lead].inverse();
    for (long i = 0; i < D; ++i) v[i] = v[i] * inv;
    pkt.covector = std::move(v);
    out.push_back(std::move(pkt));
  }
  return out;
}

/// Values of the eigen-symbol on all free generators (the paper's set S of
/// unimodular-path generator values), and the induced normalization shift
/// nu = min valuation.
inline Rat normalization_shift(SpaceContext& ctx, const EigenPacket& pkt) {
  const SymbolSpace& S = ctx.space();
  long D = S.dim(), F = S.free_rank();
  const QMat& R = S.reduction();
  long best_coeff = pkt.K->prec();
  std::vector<LocalFieldElement> candidates;
  bool any = false;
  long zero_floor = pkt.K->prec();
  for (long f = 0; f < F; ++f) {
    LocalFieldElement acc = pkt.K->zero();
    for (long i = 0; i < D; ++i) {
      const Rat& c = R.at(i, f);
      if (c == 0) continue;
      acc = acc + pkt.covector[i].scaled(c);
    }
    if (acc.is_certified_zero()) {
      zero_floor = std::min(zero_floor, acc.min_abs_prec());
      continue;
    }
    any = true;
    long cv = acc.coeff_valuation();
    if (cv < best_coeff) {
      best_coeff = cv;
      candidates.clear();
      candidates.push_back(acc);
    } else if (cv == best_coeff) {
      candidates.push_back(acc);
    }
  }
  if (!any)
    throw ComputationError("normalization_shift: all generator values vanish");
  // true valuation differs from the coefficient valuation by < 1, so only
  // the minimal-coefficient-valuation values can attain the minimum
  Rat best;
  bool have = false;
  for (const auto& v : candidates) {
    auto val = v.valuation();
    if (!val) continue;
    if (!have || *val < best) {
      best = *val;
      have = true;
    }
  }
  if (!have)
    throw PrecisionError("normalization_shift: valuations undetermined");
  if (Rat(zero_floor) <= best)
    throw PrecisionError(
        "normalization_shift: a vanishing value is not certified below the "
        "minimum");
  return best;
}

}  // namespace linv
