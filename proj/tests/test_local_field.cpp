#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "linv/local_field.hpp"

using namespace linv;

TEST_CASE("ramified quadratic: Q_5(sqrt 5)") {
  auto K = LocalField::from_modulus({Int(-5), Int(0), Int(1)}, 5, 12);
  auto x = K->gen();

  // v(x) = v_5(Norm(x)) / 2 = v_5(-5)/2 = 1/2
  auto vx = x.valuation();
  REQUIRE(vx.has_value());
  REQUIRE(*vx == Rat(1, 2));

  // v(p) = 1 (normalization), v(lift of rational) = v_p
  auto five = K->from_rational(Rat(5));
  REQUIRE(*five.valuation() == 1);
  auto r = K->from_rational(Rat(50, 3));
  REQUIRE(*r.valuation() == 2);

  // zero element: valuation infinite
  auto vr = valuation_of(K->zero());
  REQUIRE(vr.infinite);

  // multiplicativity on random elements
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<PadicElement> ca, cb;
    for (int i = 0; i < 2; ++i) {
      ca.push_back(PadicElement::from_rational(
          Rat((long)(rng() % 200) - 100), 5, 12));
      cb.push_back(PadicElement::from_rational(
          Rat((long)(rng() % 200) - 100), 5, 12));
    }
    auto a = K->from_coeffs(ca), b = K->from_coeffs(cb);
    if (a.is_certified_zero() || b.is_certified_zero()) continue;
    auto va = a.valuation(), vb = b.valuation(), vab = (a * b).valuation();
    REQUIRE(*vab == *va + *vb);
  }
}

TEST_CASE("unramified quadratic: Q_7(i)") {
  auto K = LocalField::from_modulus({Int(1), Int(0), Int(1)}, 7, 10);
  auto x = K->gen();
  REQUIRE(*x.valuation() == 0);

  // inverse: x * x^-1 = 1
  auto inv = x.inverse();
  REQUIRE((x * inv).agrees_with(K->one()));

  // division and field axioms on random elements
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<PadicElement> ca{
        PadicElement::from_rational(Rat((long)(rng() % 97) - 48), 7, 10),
        PadicElement::from_rational(Rat((long)(rng() % 97) - 48), 7, 10)};
    auto a = K->from_coeffs(ca);
    if (a.is_certified_zero()) continue;
    REQUIRE((a / a).agrees_with(K->one()));
  }
}

TEST_CASE("degree-one field behaves like Q_p") {
  auto K = LocalField::from_modulus({Int(-3), Int(1)}, 11, 8);
  auto x = K->gen();  // = 3
  REQUIRE(*x.valuation() == 0);
  auto y = K->from_rational(Rat(121));
  REQUIRE(*y.valuation() == 2);
  REQUIRE(*(x * y).valuation() == 2);
}

TEST_CASE("precision-insufficient norm raises") {
  auto K = LocalField::from_modulus({Int(1), Int(0), Int(1)}, 7, 4);
  // element = 7^4 * x viewed at absolute precision 4: all digits unknown
  std::vector<PadicElement> c{PadicElement::zero(7, 4),
                              PadicElement::zero(7, 4)};
  auto a = K->from_coeffs(c);
  REQUIRE(a.is_certified_zero());

  // an element whose norm only has cancelling digits triggers PrecisionError:
  // construct x - x computed at staggered precisions
  auto u = K->gen().scaled(PadicElement::from_int(1, 7, 2));
  auto d = u - K->gen().scaled(PadicElement::from_int(1, 7, 4));
  // d is certified zero at low precision, so valuation reports infinite
  REQUIRE(valuation_of(d).infinite);
}

TEST_CASE("residues from factorization metadata") {
  // x^2 + 1 over Q_7: unramified, residue field F_49
  auto infos = qp_factor({Int(1), Int(0), Int(1)}, 7, 10);
  REQUIRE(infos.size() == 1);
  auto K = LocalField::from_factor(infos[0], 7);
  REQUIRE(K->residue_degree() == 2);
  auto r = K->gen().residue();
  // the residue of the generator is a root of x^2+1 mod 7
  FqField F(K->residue_poly());
  auto val = F.eval(FpPoly(7, {1, 0, 1}), r);
  REQUIRE(val.is_zero());

  // ramified: x^2 - 5 over Q_5, residue of units is scalar
  auto infos2 = qp_factor({Int(-5), Int(0), Int(1)}, 5, 10);
  auto K2 = LocalField::from_factor(infos2[0], 5);
  REQUIRE(K2->ramification() == 2);
  auto two = K2->from_rational(Rat(2));
  REQUIRE(two.residue() == FpPoly::constant(5, 2));
}

TEST_CASE("polynomial evaluation in local fields") {
  auto K = LocalField::from_modulus({Int(1), Int(0), Int(1)}, 7, 10);
  // h(x) = x^2 + 1 vanishes at the generator
  auto v = evaluate_poly(qp_from_z({Int(1), Int(0), Int(1)}), K->gen());
  REQUIRE(v.is_certified_zero());
  // h(x) = x + 1/7 has valuation -1 at integral points
  auto w = evaluate_poly(QPoly{Rat(1, 7), Rat(1)}, K->from_rational(Rat(1)));
  REQUIRE(*w.valuation() == -1);
}
