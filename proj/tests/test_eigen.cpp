#include <catch2/catch_amalgamated.hpp>

#include "linv/eigen.hpp"
#include "oracles.hpp"

using namespace linv;

TEST_CASE("decompose: dimensions and determinism") {
  {
    SpaceContext ctx(3, 36);
    auto plus = decompose(ctx, 3, +1);
    auto minus = decompose(ctx, 3, -1);
    long total = 0;
    for (auto& c : plus) total += c.dim;
    for (auto& c : minus) total += c.dim;
    REQUIRE(total == 10);
    // each parity carries one copy of each Galois orbit
    long dplus = 0;
    for (auto& c : plus) dplus += c.dim;
    REQUIRE(dplus == 5);
    // simplicity witness: generator charpoly irreducible of the right degree
    for (auto& c : plus) {
      REQUIRE(zp_degree(c.gen_charpoly) == c.dim);
      REQUIRE(qp_is_irreducible(qp_from_z(c.gen_charpoly)));
    }
  }
  {
    SpaceContext ctx(11, 2);
    auto plus = decompose(ctx, 11, +1);
    REQUIRE(plus.size() == 1);
    REQUIRE(plus[0].dim == 1);
    REQUIRE(plus[0].ap_sign == 1);   // 11a: split multiplicative
    REQUIRE(plus[0].w_sign == -1);   // AL eigenvalue -1
  }
  {
    // zero-dimensional input: empty list
    SpaceContext ctx(3, 2);
    auto comps = decompose(ctx, 3, +1);
    REQUIRE(comps.empty());
  }
}

TEST_CASE("signs: both a_p signs occur at Gamma_0(3), k = 28") {
  SpaceContext ctx(3, 28);
  auto comps = decompose(ctx, 3, +1);
  bool saw_plus = false, saw_minus = false;
  long total = 0;
  for (auto& c : comps) {
    total += c.dim;
    if (c.ap_sign > 0) saw_plus = true;
    if (c.ap_sign < 0) saw_minus = true;
    // AL consistency at tame level one: a_p = -w * p^(k/2-1)
    REQUIRE(c.ap_sign == -c.w_sign);
  }
  REQUIRE(total == 4);
  REQUIRE(saw_plus);
  REQUIRE(saw_minus);
}

TEST_CASE("eigenpackets: defining property and multiplicities") {
  SpaceContext ctx(3, 36);
  auto comps = decompose(ctx, 3, +1);
  long mult_total = 0;
  for (auto& comp : comps) {
    auto packets = eigenpackets(ctx, comp, 24);
    long mult = 0;
    for (auto& pkt : packets) mult += pkt.multiplicity;
    REQUIRE(mult == comp.dim);
    mult_total += mult;

    for (auto& pkt : packets) {
      // T_2 v = a_2 v as covectors: v (T_2 x) = a_2 v(x) for basis vectors x
      QMat T2 = ctx.hecke_matrix(2);
      QPoly h2 = pkt.hpolys.count(2)
                     ? pkt.hpolys.at(2)
                     : hecke_as_generator_poly(
                           comp, restrict_operator(T2, comp.A));
      LocalFieldElement a2 = evaluate_poly(h2, *pkt.a_root);
      long D = ctx.dim();
      for (long col = 0; col < std::min<long>(D, 6); ++col) {
        QMat x(D, 1);
        x.at(col, 0) = 1;
        LocalFieldElement lhs = pkt.pair(T2 * x);
        LocalFieldElement rhs = a2 * pkt.pair(x);
        REQUIRE(lhs.agrees_with(rhs));
      }
    }
  }
  REQUIRE(mult_total == 5);
}

TEST_CASE("normalization shift: finite, scaling-covariant") {
  SpaceContext ctx(11, 2);
  auto comps = decompose(ctx, 11, +1);
  REQUIRE(comps.size() == 1);
  auto packets = eigenpackets(ctx, comps[0], 14);
  REQUIRE(packets.size() == 1);
  EigenPacket pkt = packets[0];
  Rat nu = normalization_shift(ctx, pkt);

  // rescale the covector by p: nu increases by exactly 1
  EigenPacket scaled = pkt;
  for (auto& c : scaled.covector)
    c = c.scaled(PadicElement::from_int(11, 11, 14));
  Rat nu2 = normalization_shift(ctx, scaled);
  REQUIRE(nu2 == nu + 1);
}

TEST_CASE("hecke_as_generator_poly is consistent") {
  SpaceContext ctx(3, 28);
  auto comps = decompose(ctx, 3, +1);
  for (auto& comp : comps) {
    QMat T5 = restrict_operator(ctx.hecke_matrix(5), comp.A);
    QPoly h = hecke_as_generator_poly(comp, T5);
    QMat re = detail::eval_poly_matrix(h, comp.gen_on_A);
    REQUIRE(re == T5);
  }
}
