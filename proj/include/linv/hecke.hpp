#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "linv/manin.hpp"
#include "linv/p1.hpp"
#include "linv/rat_mat.hpp"

namespace linv {

/// Column-span subspace with a cached left inverse for restricting operators.
struct Subspace {
  QMat basis;     // D x d, full column rank
  QMat left_inv;  // d x D with left_inv * basis = I_d

  long ambient_dim() const { return basis.rows(); }
  long dim() const { return basis.cols(); }
};

inline Subspace make_subspace(const QMat& basis) {
  long D = basis.rows(), d = basis.cols();
  if (d == 0) return {basis, QMat(0, D)};
  // rref of [basis | I] gives U with U*basis in rref; the top d rows of U
  // form a left inverse since basis has full column rank.
  QMat aug(D, d + D);
  for (long i = 0; i < D; ++i) {
    for (long j = 0; j < d; ++j) aug.at(i, j) = basis.at(i, j);
    aug.at(i, d + i) = 1;
  }
  auto pivots = aug.rref();
  long lead = 0;
  for (long p : pivots)
    if (p < d) ++lead;
  if (lead != d) throw ComputationError("make_subspace: basis not independent");
  QMat L(d, D);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < D; ++j) L.at(i, j) = aug.at(i, d + j);
  return {basis, L};
}

/// Matrix of T restricted to a T-stable subspace; verifies stability.
inline QMat restrict_operator(const QMat& T, const Subspace& W) {
  QMat TS = T * W.basis;
  QMat A = W.left_inv * TS;
  if (!(W.basis * A == TS))
    throw ComputationError("restrict_operator: subspace not stable");
  return A;
}

/// Intersection of a subspace with the kernel of an operator-derived map
/// (rows of `maps` applied to the subspace's basis).
inline Subspace intersect_kernel(const Subspace& W, const QMat& map_on_ambient) {
  QMat on_basis = map_on_ambient * W.basis;
  QMat K = on_basis.kernel();
  return make_subspace(W.basis * K);
}

/// Modular symbol space plus cached operators, boundary data, and the
/// cuspidal / p-new machinery. One context per (level, weight).
class SpaceContext {
 public:
  SpaceContext(long M, long k) : space_(M, k) {}

  const SymbolSpace& space() const { return space_; }
  long level() const { return space_.level(); }
  long weight() const { return space_.weight(); }
  long dim() const { return space_.dim(); }

  /// Sum over coset matrices delta of the translate action; the workhorse
  /// behind Hecke, Atkin-Lehner and degeneracy maps.
  QMat act_matrix(const std::vector<Mat22>& deltas) const {
    long D = space_.dim();
    QMat out(D, D);
    for (long b = 0; b < D; ++b) {
      auto [s, i] = space_.basis()[b];
      Mat22 g = space_.p1().lift(s);
      for (const Mat22& delta : deltas) {
        Mat22 h = delta * g;
        // contribution (P | h*) tensor {h0 -> hoo}
        Cusp from{h.b, h.d}, to{h.a, h.c};
        QMat col = space_.path_vector(i, h.adjugate(), from, to);
        for (long r = 0; r < D; ++r) out.at(r, b) += col.at(r, 0);
      }
    }
    return out;
  }

  /// T_ell for ell prime to the level, U_ell for ell dividing it.
  const QMat& hecke_matrix(long ell) {
    auto it = hecke_.find(ell);
    if (it != hecke_.end()) return it->second;
    if (!is_prime(Int(ell))) throw DomainError("hecke_matrix: ell not prime");
    std::vector<Mat22> deltas;
    for (long r = 0; r < ell; ++r) deltas.push_back({1, r, 0, ell});
    if (space_.level() % ell != 0) deltas.push_back({ell, 0, 0, 1});
    return hecke_.emplace(ell, act_matrix(deltas)).first->second;
  }

  /// Atkin-Lehner w_M (full level only), normalized to an involution.
  const QMat& atkin_lehner_matrix() {
    if (!al_) {
      QMat raw = act_matrix({Mat22{0, -1, space_.level(), 0}});
      Rat scale(Int(1), ipow(space_.level(),
                             static_cast<unsigned long>(space_.weight() / 2 - 1)));
      scale.canonicalize();
      al_ = raw.scaled(scale);
    }
    return *al_;
  }

  const QMat& star_matrix() {
    if (!star_) star_ = space_.star_matrix();
    return *star_;
  }

  /// Cusp classes (first representative each) and the boundary map; the
  /// cuspidal subspace is its kernel.
  const std::vector<Cusp>& cusp_classes() {
    ensure_boundary();
    return cusp_reps_;
  }

  const QMat& boundary_matrix() {
    ensure_boundary();
    return *boundary_;
  }

  const Subspace& cuspidal_subspace() {
    if (!cuspidal_) {
      ensure_boundary();
      cuspidal_ = make_subspace(boundary_->kernel());
    }
    return *cuspidal_;
  }

  /// Degeneracy map to a lower-level space: t = 1 is the natural projection,
  /// t = p pushes forward along diag(p, 1).
  QMat degeneracy_matrix(SpaceContext& target, long t) const {
    if (space_.level() % target.level() != 0)
      throw DomainError("degeneracy_matrix: target level must divide level");
    long Dt = target.dim(), D = space_.dim();
    QMat out(Dt, D);
    Mat22 delta = (t == 1) ? Mat22{1, 0, 0, 1} : Mat22{Int(t), 0, 0, 1};
    for (long b = 0; b < D; ++b) {
      auto [s, i] = space_.basis()[b];
      Mat22 h = delta * space_.p1().lift(s);
      Cusp from{h.b, h.d}, to{h.a, h.c};
      QMat col = target.space().path_vector(i, h.adjugate(), from, to);
      for (long r = 0; r < Dt; ++r) out.at(r, b) = col.at(r, 0);
    }
    return out;
  }

  /// Cuspidal p-new subspace: kernel of the boundary map intersected with
  /// the kernels of both degeneracy maps to level M/p. Requires p || M.
  const Subspace& cuspidal_new_subspace(long p) {
    auto it = new_sub_.find(p);
    if (it != new_sub_.end()) return it->second;
    long M = space_.level();
    if (M % p != 0 || (M / p) % p == 0)
      throw DomainError("cuspidal_new_subspace: requires p || M");
    if (!lower_) lower_ = std::make_unique<SpaceContext>(M / p, space_.weight());
    const Subspace& C = cuspidal_subspace();
    QMat d1 = degeneracy_matrix(*lower_, 1);
    QMat dp = degeneracy_matrix(*lower_, p);
    QMat stacked = QMat::vstack(d1 * C.basis, dp * C.basis);
    QMat K = stacked.kernel();
    Subspace s = make_subspace(C.basis * K);
    return new_sub_.emplace(p, std::move(s)).first->second;
  }

  /// Star eigenspace slice of a subspace (eps = +1 or -1).
  Subspace star_slice(const Subspace& W, int eps) {
    QMat st = restrict_operator(star_matrix(), W);
    for (long i = 0; i < st.rows(); ++i) st.at(i, i) -= eps;
    QMat K = st.kernel();
    return make_subspace(W.basis * K);
  }

 private:
  void ensure_boundary() {
    if (boundary_) return;
    long D = space_.dim();
    // collect cusps appearing as endpoints of basis lifts
    std::vector<Cusp> cusps;
    auto class_of = [&](const Cusp& c) -> long {
      Cusp n = c.normalized();
      for (size_t i = 0; i < cusps.size(); ++i)
        if (cusp_equivalent(space_.level(), cusps[i], n))
          return static_cast<long>(i);
      cusps.push_back(n);
      return static_cast<long>(cusps.size()) - 1;
    };
    std::vector<std::map<long, Rat>> rows;
    auto add_entry = [&](long cls, long col, const Rat& v) {
      while (rows.size() <= static_cast<size_t>(cls)) rows.push_back({});
      rows[cls][col] += v;
    };
    for (long b = 0; b < D; ++b) {
      auto [s, i] = space_.basis()[b];
      Mat22 g = space_.p1().lift(s);
      // Basis symbol is (P|g*) tensor {g0 -> goo} with P = X^i Y^(k-2-i).
      // Since g* g = 1, the boundary functional values collapse to
      // (P|g*)(v_goo) = P(1,0) and (P|g*)(v_g0) = P(0,1).
      Cusp to = Cusp{g.a, g.c}.normalized();
      Cusp from = Cusp{g.b, g.d}.normalized();
      if (i == space_.weight() - 2) add_entry(class_of(to), b, Rat(1));
      if (i == 0) add_entry(class_of(from), b, Rat(-1));
    }
    QMat m(static_cast<long>(rows.size()), D);
    for (size_t r = 0; r < rows.size(); ++r)
      for (auto& [c, v] : rows[r]) m.at(static_cast<long>(r), c) = v;
    boundary_ = std::move(m);
    cusp_reps_ = std::move(cusps);
  }

  SymbolSpace space_;
  std::map<long, QMat> hecke_;
  std::optional<QMat> al_, star_, boundary_;
  std::optional<Subspace> cuspidal_;
  std::map<long, Subspace> new_sub_;
  std::vector<Cusp> cusp_reps_;
  std::unique_ptr<SpaceContext> lower_;
};

}  // namespace linv
