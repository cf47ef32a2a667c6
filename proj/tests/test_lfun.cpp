#include <catch2/catch_amalgamated.hpp>

#include "linv/lfun.hpp"
#include "linv/tate.hpp"
#include "oracles.hpp"

using namespace linv;

namespace {

// j-invariant from a Weierstrass model (exact rationals).
Rat j_invariant(long a1, long a2, long a3, long a4, long a6) {
  Rat b2 = Rat(a1 * a1 + 4 * a2);
  Rat b4 = Rat(2 * a4 + a1 * a3);
  Rat b6 = Rat(a3 * a3 + 4 * a6);
  Rat c4 = b2 * b2 - 24 * b4;
  Rat c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
  Rat disc = (c4 * c4 * c4 - c6 * c6) / 1728;
  return c4 * c4 * c4 / disc;
}

}  // namespace

TEST_CASE("tate q-series matches the classical expansion") {
  auto c = tate_q_series(5);
  REQUIRE(c[0] == 1);
  REQUIRE(c[1] == 744);
  REQUIRE(c[2] == 750420);
  REQUIRE(c[3] == Int("872769632"));
}

TEST_CASE("tate parameter valuation and 11a") {
  // j(11a1) = -2^12 31^3 / 11^5
  Rat j11 = j_invariant(0, -1, 1, -10, -20);
  REQUIRE(j11 == Rat(-4096) * Rat(29791) / Rat(161051));
  REQUIRE(rat_valuation(j11, 11) == -5);
  PadicElement q = tate_parameter(j11, 11, 12);
  REQUIRE(q.valuation() == 5);

  PadicElement L = tate_linvariant(j11, 11, 8);
  REQUIRE(!L.is_zero());
  REQUIRE(L.abs_precision() >= 8);

  REQUIRE_THROWS_AS(tate_linvariant(Rat(5), 5, 4), DomainError);
}

TEST_CASE("taylor truncation") {
  // c_0 = a^(k/2-1) log<a>
  long p = 5, M = 8, k = 8;
  Int a = 2;
  auto c = taylor_truncation(a, k, p, M);
  REQUIRE(c.size() == (size_t)(k - 1));
  PadicElement expect =
      log_angle(a, p, M) * PadicElement::from_rational(Rat(8), p, M + 2);
  REQUIRE(c[0].agrees_with(expect));

  // k = 2: only the log coefficient
  auto c2 = taylor_truncation(a, 2, p, M);
  REQUIRE(c2.size() == 1);
  REQUIRE(c2[0].agrees_with(log_angle(a, p, M)));

  // Lemma bound at m = p: v_p(c_p) >= -1
  long kk = 30;
  auto c3 = taylor_truncation(Int(7), kk, p, 10);
  REQUIRE(!c3[p].is_zero());
  REQUIRE(c3[p].valuation() >= -1);
}

TEST_CASE("admissible discriminants and sign conditions") {
  // 11a: eps = +1, a_p = +1: D = 1 admissible first
  auto ds = admissible_discriminants(1, 11, +1, -1, 2, 50);
  REQUIRE(!ds.empty());
  REQUIRE(ds[0] == 1);
  // a_p = -1 forces chi_D(p) = -1, so D != 1
  auto ds2 = admissible_discriminants(1, 11, -1, -1, 2, 50);
  for (auto& D : ds2) REQUIRE(D != 1);
  // 37a: eps = -1 (rank one), a_37 = -1; smallest admissible is D = 5
  auto ds3 = admissible_discriminants(1, 37, -1, +1, 2, 50);
  REQUIRE(!ds3.empty());
  REQUIRE(ds3[0] == 5);
}

namespace {

struct PacketBundle {
  SpaceContext ctx;
  std::vector<EigenComponent> comps;
  std::vector<EigenPacket> packets;
  Rat nu;

  PacketBundle(long M, long k, long p, int eps, long prec)
      : ctx(M, k), comps(decompose(ctx, p, eps)) {
    REQUIRE(comps.size() == 1);
    packets = eigenpackets(ctx, comps[0], prec);
    REQUIRE(packets.size() == 1);
    nu = normalization_shift(ctx, packets[0]);
  }
};

}  // namespace

TEST_CASE("11a: central value, distribution relation, exceptional zero") {
  PacketBundle b(11, 2, 11, +1, 16);
  LFunEvaluator ev(b.ctx, b.packets[0]);
  TwistContext tw = make_twist_context(Int(1));

  // path pairing: empty path gives zero
  REQUIRE(ev.path_pairing(QPoly{Rat(1)}, Int(1), Int(0)).is_certified_zero());

  // central value nonzero (rank zero)
  auto central = ev.central_value(tw);
  REQUIRE(!central.is_certified_zero());

  // wrong star parity: the central value vanishes identically
  PacketBundle bm(11, 2, 11, -1, 16);
  LFunEvaluator evm(bm.ctx, bm.packets[0]);
  REQUIRE(evm.central_value(tw).is_certified_zero());

  // distribution relation mu(P,a,p^n) = sum over lifts mod p^(n+1)
  QPoly one{Rat(1)};
  auto lhs = ev.mu_value(one, Int(3), 1);
  LocalFieldElement rhs = b.packets[0].K->zero();
  for (long c = 0; c < 11; ++c) {
    Int bb = 3 + 11 * c;
    rhs = rhs + ev.mu_value(one, bb, 2);
  }
  REQUIRE(lhs.agrees_with(rhs));

  // exceptional zero: a_p = +1, the exact Riemann sum vanishes
  auto ez = ev.exceptional_zero_sum(tw, 1);
  REQUIRE(ez.is_certified_zero());
  REQUIRE(ez.min_abs_prec() >= 6);
}

TEST_CASE("11a: L-invariant matches the Tate oracle") {
  PacketBundle b(11, 2, 11, +1, 16);
  LFunEvaluator ev(b.ctx, b.packets[0]);
  TwistContext tw = make_twist_context(Int(1));

  auto central = ev.central_value(tw);
  auto vinf = central.valuation();
  REQUIRE(vinf.has_value());

  auto est1 = ev.derivative_estimate(tw, 1, b.nu);
  auto est2 = ev.derivative_estimate(tw, 2, b.nu);
  // Theorem certificate: v(L1 - L2) - nu >= k/2 - floor(log(k-1)/log p) = 1
  auto diff = est1.value - est2.value;
  if (!diff.is_certified_zero()) {
    auto vd = diff.valuation();
    REQUIRE(vd.has_value());
    REQUIRE(*vd - b.nu >= 1);
  }

  // deeper estimate for digit comparison
  auto est4 = ev.derivative_estimate(tw, 4, b.nu);
  auto v1 = est4.value.valuation();
  REQUIRE(v1.has_value());

  // certificate at n = 4: v(L4) - nu < 4 (k=2, e=0) must certify
  REQUIRE(*v1 - b.nu < Rat(4));

  // v_p(L) = v(L_n) - v(L_infty)
  Rat vL = *v1 - *vinf;
  Rat j11 = j_invariant(0, -1, 1, -10, -20);
  PadicElement tate = tate_linvariant(j11, 11, 8);
  REQUIRE(Rat(tate.valuation()) == vL);

  // value agreement to >= 3 digits: L = L_n / L_infty in Q_p here
  LocalFieldElement ratio = est4.value / central;
  REQUIRE(ratio.field()->degree() == 1);
  PadicElement ratio_p = ratio.coeffs()[0];
  PadicElement delta = ratio_p - tate;
  long agree_digits =
      delta.is_zero() ? delta.abs_precision() : delta.valuation();
  REQUIRE(agree_digits >= tate.valuation() + 3);
}

TEST_CASE("certificate digits formula") {
  // (p=3, k=36, n=1): 18 - 3 = 15
  PacketBundle b(11, 2, 11, +1, 12);  // any packet; formula only needs n,k,p
  LFunEvaluator ev(b.ctx, b.packets[0]);
  (void)ev;
  Rat digits = Rat(1 * 36, 2) - Rat(floor_log(35, 3));
  digits.canonicalize();
  REQUIRE(digits == 15);
}

TEST_CASE("twisted path: 37a needs D = 5 and gets a nonzero central value") {
  SpaceContext ctx(37, 2);
  auto plus = decompose(ctx, 37, +1);
  auto minus = decompose(ctx, 37, -1);
  // 37a is the orbit with w = +1 (so analytic sign -1, rank one) and
  // a_37 = -w = -1; its twists need D != 1.
  auto ds = admissible_discriminants(1, 37, -1, +1, 2, 100);
  REQUIRE(ds[0] == 5);
  TwistContext tw = make_twist_context(ds[0]);
  int eps = central_parity(2, tw);
  REQUIRE(eps == 1);  // D = 5 > 0, weight 2

  const EigenComponent* target = nullptr;
  for (auto* comps : {&plus, &minus})
    for (auto& c : *comps)
      if (c.dim == 1 && c.w_sign == +1 && c.ap_sign == -1 && c.eps == eps)
        target = &c;
  REQUIRE(target != nullptr);
  auto packets = eigenpackets(ctx, *target, 14);
  REQUIRE(packets.size() == 1);
  LFunEvaluator ev(ctx, packets[0]);
  auto central = ev.central_value(tw);
  REQUIRE(!central.is_certified_zero());
}
