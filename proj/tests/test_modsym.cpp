#include <catch2/catch_amalgamated.hpp>

#include "linv/hecke.hpp"
#include "oracles.hpp"

using namespace linv;

TEST_CASE("dimension oracle sanity") {
  REQUIRE(oracles::dim_cuspforms(1, 12) == 1);
  REQUIRE(oracles::dim_cuspforms(1, 36) == 3);
  REQUIRE(oracles::dim_cuspforms(3, 36) == 11);
  REQUIRE(oracles::dim_cuspforms(3, 28) == 8);
  REQUIRE(oracles::dim_cuspforms(11, 2) == 1);
  REQUIRE(oracles::dim_cuspforms(3, 2) == 0);
  REQUIRE(oracles::tau(2) == -24);
  REQUIRE(oracles::tau(3) == 252);
  REQUIRE(oracles::curve_ap(0, -1, 1, -10, -20, 2) == -2);  // 11a mod 2
  REQUIRE(oracles::curve_ap(0, -1, 1, -10, -20, 3) == -1);  // 11a mod 3
}

TEST_CASE("cuspidal dimensions match the classical formula") {
  // spec examples first
  {
    SpaceContext s(1, 12);
    REQUIRE(s.cuspidal_subspace().dim() == 2 * oracles::dim_cuspforms(1, 12));
  }
  {
    SpaceContext s(11, 2);
    REQUIRE(s.cuspidal_subspace().dim() == 2);
  }
  {
    SpaceContext s(3, 2);
    REQUIRE(s.cuspidal_subspace().dim() == 0);
  }
  // a small sweep (full grid lives in the acceptance suite)
  for (long M : {1L, 2L, 5L, 6L, 7L, 9L, 10L, 12L}) {
    for (long k : {2L, 4L, 6L, 8L}) {
      SpaceContext s(M, k);
      INFO("M=" << M << " k=" << k);
      REQUIRE(s.cuspidal_subspace().dim() ==
              2 * oracles::dim_cuspforms(M, k));
    }
  }
}

TEST_CASE("odd weight rejected") {
  REQUIRE_THROWS_AS(SymbolSpace(5, 3), DomainError);
}

TEST_CASE("Hecke eigenvalues: tau(2) on level 1 weight 12") {
  SpaceContext s(1, 12);
  const Subspace& C = s.cuspidal_subspace();
  QMat T2 = restrict_operator(s.hecke_matrix(2), C);
  // T2 acts on the 2-dim cuspidal space by tau(2) = -24
  REQUIRE(T2.is_scalar(Rat(oracles::tau(2))));
  QMat T3 = restrict_operator(s.hecke_matrix(3), C);
  REQUIRE(T3.is_scalar(Rat(oracles::tau(3))));
}

TEST_CASE("Hecke eigenvalue a_2 = -2 on level 11 weight 2") {
  SpaceContext s(11, 2);
  const Subspace& C = s.cuspidal_subspace();
  QMat T2 = restrict_operator(s.hecke_matrix(2), C);
  REQUIRE(T2.is_scalar(Rat(oracles::curve_ap(0, -1, 1, -10, -20, 2))));
}

TEST_CASE("Hecke operators commute") {
  for (auto [M, k] : std::vector<std::pair<long, long>>{{5, 8}, {14, 2}, {3, 12}}) {
    SpaceContext s(M, k);
    const QMat& T2 = s.hecke_matrix(2);
    const QMat& T3 = s.hecke_matrix(3);
    REQUIRE(T2 * T3 == T3 * T2);
    const QMat& st = s.star_matrix();
    REQUIRE(st * T2 == T2 * st);
    REQUIRE(st * st == QMat::identity(s.dim()));
  }
}

TEST_CASE("Atkin-Lehner involution and sign on 11a") {
  SpaceContext s(11, 2);
  const Subspace& C = s.cuspidal_subspace();
  QMat W = restrict_operator(s.atkin_lehner_matrix(), C);
  REQUIRE((W * W).is_scalar(Rat(1)));
  // 11a has functional equation sign +1 (rank zero), and for weight 2 the
  // analytic sign is -(AL eigenvalue), so W = -1 on the newform line.
  REQUIRE(W.is_scalar(Rat(-1)));
  // U_11 = -W * 11^(k/2-1) = +1: split multiplicative reduction
  QMat U = restrict_operator(s.hecke_matrix(11), C);
  REQUIRE(U.is_scalar(Rat(1)));

  // AL commutes with Hecke away from the level on the full space, and with
  // U_2 on the 2-new subspace of level 14 (where U_2^2 = 2^(k-2)).
  SpaceContext s14(14, 2);
  REQUIRE(s14.atkin_lehner_matrix() * s14.hecke_matrix(3) ==
          s14.hecke_matrix(3) * s14.atkin_lehner_matrix());
  const Subspace& N14 = s14.cuspidal_new_subspace(2);
  QMat W14 = restrict_operator(s14.atkin_lehner_matrix(), N14);
  QMat U2 = restrict_operator(s14.hecke_matrix(2), N14);
  REQUIRE(W14 * U2 == U2 * W14);
}

TEST_CASE("cuspidal new subspace and U_p^2 = p^(k-2)") {
  {
    SpaceContext s(11, 2);
    const Subspace& N = s.cuspidal_new_subspace(11);
    REQUIRE(N.dim() == 2);
    QMat U = restrict_operator(s.hecke_matrix(11), N);
    REQUIRE(U.is_scalar(Rat(1)));  // +p^(k/2-1) = +1, split reduction
  }
  {
    SpaceContext s(3, 36);
    const Subspace& N = s.cuspidal_new_subspace(3);
    REQUIRE(N.dim() == 10);  // 2 * (five newforms)
    QMat U = restrict_operator(s.hecke_matrix(3), N);
    QMat U2 = U * U;
    REQUIRE(U2.is_scalar(Rat(ipow(3, 34))));
  }
  {
    SpaceContext s(3, 28);
    const Subspace& N = s.cuspidal_new_subspace(3);
    REQUIRE(N.dim() == 8);
    QMat U = restrict_operator(s.hecke_matrix(3), N);
    REQUIRE((U * U).is_scalar(Rat(ipow(3, 26))));
  }
  {
    // T_2 restricts to the new subspace (degeneracy compatibility)
    SpaceContext s(15, 4);
    const Subspace& N = s.cuspidal_new_subspace(5);
    REQUIRE_NOTHROW(restrict_operator(s.hecke_matrix(2), N));
  }
}

TEST_CASE("star slices split the new subspace evenly") {
  SpaceContext s(3, 36);
  const Subspace& N = s.cuspidal_new_subspace(3);
  Subspace plus = s.star_slice(N, +1);
  Subspace minus = s.star_slice(N, -1);
  REQUIRE(plus.dim() == 5);
  REQUIRE(minus.dim() == 5);
  REQUIRE(plus.dim() + minus.dim() == N.dim());
}

TEST_CASE("path vectors: additivity and Gamma_0-invariance") {
  SpaceContext s(11, 2);
  Mat22 id{1, 0, 0, 1};
  Cusp inf = Cusp::infinity();
  Cusp a{Int(1), Int(3)}, b{Int(2), Int(7)}, c{Int(0), Int(1)};
  QMat v1 = s.space().path_vector(0, id, a, b);
  QMat v2 = s.space().path_vector(0, id, b, c);
  QMat v3 = s.space().path_vector(0, id, a, c);
  REQUIRE(v1 + v2 == v3);
  // empty path
  REQUIRE(s.space().path_vector(0, id, inf, inf).is_zero());
  // {oo -> 0} pairs nontrivially with the cuspidal space (rank 0 curve)
  QMat central = s.space().path_vector(0, id, inf, c);
  REQUIRE(!central.is_zero());
}
