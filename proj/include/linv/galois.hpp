#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "linv/eigen.hpp"
#include "linv/fp_poly.hpp"
#include "linv/lfun.hpp"

namespace linv {

/// Residual (mod p) Hecke eigensystem of a packet: the a_ell mod p for
/// ell <= B prime to Np, written in a standard model of their residue field
/// and canonicalized under Frobenius. Two packets lie in the same residual
/// class iff their canonical forms coincide; this is the eigensystem proxy
/// for the semisimplified mod-p Galois representation.
struct ResidualEigensystem {
  long p = 0;
  long f = 1;        // degree of the field generated by the residues
  FpPoly modulus;    // standard irreducible of degree f (t for f = 1)
  std::vector<std::pair<long, FpPoly>> residues;  // ascending ell
  std::string canonical;

  bool operator==(const ResidualEigensystem& o) const {
    return canonical == o.canonical;
  }
};

namespace detail {

inline std::string fp_poly_str(const FpPoly& f) {
  std::string s;
  for (long c : f.c) s += std::to_string(c) + ".";
  return s;
}

/// Canonical string of a residue tuple over F_{p^f}: lexicographically least
/// Frobenius translate, residues listed by ascending ell.
inline std::string canonical_tuple(long p, const FqField& F,
                                   std::vector<std::pair<long, FpPoly>>& tuple) {
  std::string best;
  std::vector<std::pair<long, FpPoly>> best_tuple;
  long f = F.degree();
  auto current = tuple;
  for (long j = 0; j < std::max(1L, f); ++j) {
    std::string s = std::to_string(p) + "|" + std::to_string(f) + "|" +
                    fp_poly_str(F.modulus()) + "|";
    for (auto& [ell, r] : current) s += std::to_string(ell) + ":" + fp_poly_str(r) + ";";
    if (best.empty() || s < best) {
      best = s;
      best_tuple = current;
    }
    for (auto& [ell, r] : current) r = F.frobenius(r);
  }
  tuple = best_tuple;
  return best;
}

}  // namespace detail

/// Compute the residual eigensystem of a packet for primes ell <= B prime to
/// the level. The h-polynomials expressing T_ell through the generator are
/// prepared on demand.
inline ResidualEigensystem residual_eigensystem(SpaceContext& ctx,
                                                EigenPacket& pkt, long B) {
  const EigenComponent& comp = *pkt.comp;
  long p = comp.p;
  ResidualEigensystem sys;
  sys.p = p;

  long f0 = pkt.K->residue_degree();
  FqField packet_field(f0 == 1 ? FpPoly::x(p) : pkt.K->residue_poly());

  // residues in the packet's own model
  std::vector<std::pair<long, FpPoly>> raw;
  for (long ell = 2; ell <= B; ell = next_prime(ell)) {
    if (ctx.level() % ell == 0) continue;
    if (!pkt.hpolys.count(ell)) {
      QMat Tl = restrict_operator(ctx.hecke_matrix(ell), comp.A);
      pkt.hpolys[ell] = hecke_as_generator_poly(comp, Tl);
    }
    LocalFieldElement a = pkt.a_ell(ell);
    FpPoly r = a.residue();
    raw.push_back({ell, fp_rem(r, packet_field.modulus())});
  }

  // minimal subfield generated by the residues: fixed by Frobenius^f'
  long fgen = 1;
  if (f0 > 1) {
    for (long fp = 1; fp <= f0; ++fp) {
      if (f0 % fp != 0) continue;
      bool fixed = true;
      for (auto& [ell, r] : raw) {
        FpPoly img = r;
        for (long i = 0; i < fp; ++i) img = packet_field.frobenius(img);
        if (!(img == packet_field.reduce(r))) {
          fixed = false;
          break;
        }
      }
      if (fixed) {
        fgen = fp;
        break;
      }
    }
  }
  sys.f = fgen;
  sys.modulus = standard_irreducible(p, fgen);
  FqField std_field(sys.modulus);

  if (fgen == 1) {
    // residues are scalars
    for (auto& [ell, r] : raw) {
      long val = r.is_zero() ? 0 : r.coeff(0);
      sys.residues.push_back({ell, FpPoly::constant(p, val)});
    }
  } else {
    // embed the packet model into the standard model: send the packet
    // generator to a root of its minimal polynomial in the standard field
    FqField big(f0 == fgen ? sys.modulus : standard_irreducible(p, f0));
    // when f0 > fgen the residues generate a proper subfield; embed raw
    // residues into `big`, then rewrite in the standard model of F_{p^fgen}
    auto roots = big.roots_of(packet_field.modulus());
    if (roots.empty())
      throw ComputationError("residual_eigensystem: embedding root missing");
    FpPoly rho = roots[0];
    auto embed = [&](const FpPoly& r) {
      // r(t) -> r(rho) in `big`
      FpPoly acc = FpPoly::zero(p);
      for (size_t i = r.c.size(); i-- > 0;) {
        acc = big.mul(acc, rho);
        acc = fp_add(acc, FpPoly::constant(p, r.c[i]));
      }
      return acc;
    };
    if (f0 == fgen) {
      for (auto& [ell, r] : raw) sys.residues.push_back({ell, embed(r)});
    } else {
      // find the standard subfield generator inside `big`
      auto sub_roots = big.roots_of(sys.modulus);
      if (sub_roots.empty())
        throw ComputationError("residual_eigensystem: subfield root missing");
      FpPoly sg = sub_roots[0];
      // powers of sg span the subfield; solve small linear systems over F_p
      // to express each embedded residue in the power basis of sg
      std::vector<FpPoly> basis;
      FpPoly cur = FpPoly::one(p);
      for (long i = 0; i < fgen; ++i) {
        basis.push_back(cur);
        cur = big.mul(cur, sg);
      }
      for (auto& [ell, r] : raw) {
        FpPoly target = embed(r);
        // brute-force the (tiny) coefficient space
        long total = 1;
        for (long i = 0; i < fgen; ++i) total *= p;
        bool found = false;
        for (long code = 0; code < total && !found; ++code) {
          long t = code;
          FpPoly acc = FpPoly::zero(p);
          std::vector<long> cs(fgen);
          for (long i = 0; i < fgen; ++i) {
            cs[i] = t % p;
            t /= p;
            acc = fp_add(acc, fp_scale(basis[i], cs[i]));
          }
          if (acc == target) {
            sys.residues.push_back({ell, FpPoly(p, std::move(cs))});
            found = true;
          }
        }
        if (!found)
          throw ComputationError("residual_eigensystem: subfield rewrite failed");
      }
    }
  }
  sys.canonical = detail::canonical_tuple(p, std_field, sys.residues);
  return sys;
}

/// A residual class: canonical representative eigensystem, members, and the
/// cyclotomic twist links j -> class of (ell -> ell^j a_ell).
struct ResidualClass {
  long id = 0;
  ResidualEigensystem representative;
  std::vector<long> member_records;
  std::map<long, long> twist_links;
};

/// Partition eigensystems into classes (equal canonical forms), deterministic
/// ids in lexicographic order of the canonical strings, and compute twist
/// links among the classes.
inline std::vector<ResidualClass> cluster(
    const std::vector<ResidualEigensystem>& systems) {
  std::map<std::string, std::vector<long>> groups;
  std::map<std::string, const ResidualEigensystem*> reps;
  for (size_t i = 0; i < systems.size(); ++i) {
    groups[systems[i].canonical].push_back(static_cast<long>(i));
    reps.emplace(systems[i].canonical, &systems[i]);
  }
  std::vector<ResidualClass> classes;
  std::map<std::string, long> id_of;
  for (auto& [canon, members] : groups) {
    ResidualClass cls;
    cls.id = static_cast<long>(classes.size());
    cls.representative = *reps[canon];
    cls.member_records = members;
    id_of[canon] = cls.id;
    classes.push_back(std::move(cls));
  }
  // twist links: a_ell -> ell^j a_ell
  for (auto& cls : classes) {
    long p = cls.representative.p;
    FqField F(cls.representative.modulus);
    for (long j = 0; j < p - 1; ++j) {
      auto tuple = cls.representative.residues;
      for (auto& [ell, r] : tuple) {
        long scalar = mod_pow(Int(ell), Int(j), Int(p)).get_si();
        r = fp_scale(r, scalar);
      }
      std::string canon = detail::canonical_tuple(p, F, tuple);
      auto it = id_of.find(canon);
      if (it != id_of.end()) cls.twist_links[j] = it->second;
    }
  }
  return classes;
}

/// Does the class match the Eisenstein eigensystem omega^a + omega^b, i.e.
/// a_ell = ell^a + ell^b mod p for every stored ell?
inline bool matches_eisenstein(const ResidualClass& cls, long a, long b) {
  long p = cls.representative.p;
  if (cls.representative.f != 1) return false;
  for (auto& [ell, r] : cls.representative.residues) {
    long expect = (mod_pow(Int(ell), Int(a), Int(p)) +
                   mod_pow(Int(ell), Int(b), Int(p)))
                      .get_si() %
                  p;
    long got = r.is_zero() ? 0 : r.coeff(0);
    if (got != expect % p) return false;
  }
  return true;
}

}  // namespace linv
