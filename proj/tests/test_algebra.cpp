#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "linv/fp_poly.hpp"
#include "linv/int_poly.hpp"
#include "linv/qp_factor.hpp"
#include "linv/rat_mat.hpp"

using namespace linv;

TEST_CASE("Fp polynomial arithmetic") {
  FpPoly a(5, {1, 2, 3});  // 3x^2 + 2x + 1
  FpPoly b(5, {4, 1});     // x + 4
  auto [q, r] = fp_divmod(a, b);
  REQUIRE(fp_add(fp_mul(q, b), r) == a);
  REQUIRE(r.degree() <= 0);

  // gcd of (x-1)(x-2) and (x-1)(x-3) is x-1 = x+4 mod 5
  FpPoly f = fp_mul(FpPoly(5, {4, 1}), FpPoly(5, {3, 1}));
  FpPoly g = fp_mul(FpPoly(5, {4, 1}), FpPoly(5, {2, 1}));
  REQUIRE(fp_gcd(f, g) == FpPoly(5, {4, 1}));

  auto [gg, s, t] = fp_ext_gcd(f, g);
  REQUIRE(fp_add(fp_mul(s, f), fp_mul(t, g)) == gg);
}

TEST_CASE("Fp factorization") {
  // x^2 + 1 irreducible mod 3, splits mod 5
  REQUIRE(fp_is_irreducible(FpPoly(3, {1, 0, 1})));
  auto fac5 = fp_factor(FpPoly(5, {1, 0, 1}));
  REQUIRE(fac5.size() == 2);
  for (auto& [f, m] : fac5) REQUIRE(f.degree() == 1);

  // random products reassemble
  std::mt19937_64 rng(42);
  for (long p : {3L, 7L, 13L}) {
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<long> c(1 + rng() % 9, 0);
      for (auto& v : c) v = static_cast<long>(rng() % (uint64_t)p);
      c.push_back(1);
      FpPoly f(p, std::move(c));
      auto fac = fp_factor(f);
      FpPoly prod = FpPoly::one(p);
      for (auto& [g, m] : fac) {
        REQUIRE(fp_is_irreducible(g));
        for (long i = 0; i < m; ++i) prod = fp_mul(prod, g);
      }
      REQUIRE(prod == fp_monic(f));
    }
  }

  // multiplicities divisible by p are recovered
  FpPoly lin(3, {1, 1});
  FpPoly f3 = FpPoly::one(3);
  for (int i = 0; i < 3; ++i) f3 = fp_mul(f3, lin);
  auto fac3 = fp_factor(f3);
  REQUIRE(fac3.size() == 1);
  REQUIRE(fac3[0].second == 3);
}

TEST_CASE("roots and standard finite fields") {
  // x^2 - 1 mod 7: roots 1 and 6
  auto rts = fp_roots(FpPoly(7, {6, 0, 1}));
  REQUIRE(rts == std::vector<long>{1, 6});

  FpPoly m = standard_irreducible(5, 2);
  REQUIRE(m.degree() == 2);
  FqField F(m);
  // Frobenius has order 2 on F_25
  FpPoly t = FpPoly::x(5);
  REQUIRE(F.frobenius(F.frobenius(t)) == F.reduce(t));
  // x^2+2 (irreducible mod 5) has two roots in F_25, swapped by Frobenius
  FpPoly h(5, {2, 0, 1});
  REQUIRE(fp_is_irreducible(h));
  auto roots = F.roots_of(h);
  REQUIRE(roots.size() == 2);
  REQUIRE(F.frobenius(roots[0]) == roots[1]);
}

TEST_CASE("Hensel lifting") {
  // x^2 - 2 = (x - 3)(x + 3) mod 7, lift to 7^8
  ZPoly f{Int(-2), Int(0), Int(1)};
  std::vector<FpPoly> fac{FpPoly(7, {4, 1}), FpPoly(7, {3, 1})};
  auto lifted = hensel_lift(f, fac, 7, 8);
  REQUIRE(lifted.size() == 2);
  Int mod = ipow(7, 8);
  ZPoly prod = zp_mod(zp_mul(lifted[0], lifted[1]), mod);
  REQUIRE(prod == zp_mod(f, mod));
  // each lifted root squares to 2 mod 7^8
  for (auto& g : lifted) {
    Int root = imod(-g[0], mod);
    REQUIRE(imod(root * root, mod) == imod(Int(2), mod));
  }
}

TEST_CASE("Zassenhaus factorization over Q") {
  // (x^2+1)(x-3)(x^3 - x - 1)
  QPoly f = qp_mul(qp_mul(qp_from_z({Int(1), Int(0), Int(1)}),
                          qp_from_z({Int(-3), Int(1)})),
                   qp_from_z({Int(-1), Int(-1), Int(0), Int(1)}));
  auto fac = qp_factor_monic(f);
  REQUIRE(fac.size() == 3);
  long total = 0;
  for (auto& [g, m] : fac) total += m * qp_degree(g);
  REQUIRE(total == qp_degree(f));

  // repeated factors
  QPoly sq = qp_mul(qp_from_z({Int(-1), Int(1)}), qp_from_z({Int(-1), Int(1)}));
  sq = qp_mul(sq, qp_from_z({Int(1), Int(1), Int(1)}));
  auto fac2 = qp_factor_monic(sq);
  REQUIRE(fac2.size() == 2);
  bool saw_sq = false;
  for (auto& [g, m] : fac2)
    if (m == 2) {
      saw_sq = true;
      REQUIRE(qp_degree(g) == 1);
    }
  REQUIRE(saw_sq);

  // rational coefficients: (x - 1/2)(x + 1/3)
  QPoly fr = qp_mul(QPoly{Rat(-1, 2), Rat(1)}, QPoly{Rat(1, 3), Rat(1)});
  auto fac3 = qp_factor_monic(fr);
  REQUIRE(fac3.size() == 2);

  REQUIRE(qp_is_irreducible(qp_from_z({Int(-5), Int(0), Int(1)})));
  REQUIRE(qp_is_irreducible(qp_from_z({Int(-24), Int(1)})));

  // random product property
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    QPoly prod{Rat(1)};
    long want = 0;
    for (int j = 0; j < 3; ++j) {
      long d = 1 + rng() % 3;
      QPoly g(d + 1);
      g[d] = 1;
      for (long i = 0; i < d; ++i) g[i] = Rat((long)(rng() % 19) - 9);
      prod = qp_mul(prod, g);
      want += d;
    }
    auto fc = qp_factor_monic(prod);
    long got = 0;
    QPoly re{Rat(1)};
    for (auto& [g, m] : fc) {
      got += m * qp_degree(g);
      for (long i = 0; i < m; ++i) re = qp_mul(re, g);
    }
    REQUIRE(got == want);
    REQUIRE(re == prod);
  }
}

TEST_CASE("qp_factor: unramified and ramified splits") {
  // x^2 - 2 over Q_7: two unramified linear factors
  auto f1 = qp_factor({Int(-2), Int(0), Int(1)}, 7, 10);
  REQUIRE(f1.size() == 2);
  for (auto& info : f1) {
    REQUIRE(info.e == 1);
    REQUIRE(info.f0 == 1);
    REQUIRE(info.degree() == 1);
  }

  // x^2 + 1 over Q_7 is irreducible (7 = 3 mod 4): inert, f0 = 2
  auto f2 = qp_factor({Int(1), Int(0), Int(1)}, 7, 10);
  REQUIRE(f2.size() == 1);
  REQUIRE(f2[0].f0 == 2);
  REQUIRE(f2[0].e == 1);

  // x^2 - 5 over Q_5: totally ramified, certified via Newton polygon
  auto f3 = qp_factor({Int(-5), Int(0), Int(1)}, 5, 10);
  REQUIRE(f3.size() == 1);
  REQUIRE(f3[0].e == 2);
  REQUIRE(f3[0].f0 == 1);

  // (x^2 - 5)(x - 2) over Q_5: mixed
  ZPoly mixed = zp_mul({Int(-5), Int(0), Int(1)}, {Int(-2), Int(1)});
  auto f4 = qp_factor(mixed, 5, 12);
  REQUIRE(f4.size() == 2);
  long degsum = 0;
  for (auto& i : f4) degsum += i.degree();
  REQUIRE(degsum == 3);
}

TEST_CASE("qp_factor: congruent-root blocks are separated") {
  // (x - 1)(x - 28) over Q_3: both roots = 1 mod 3; split via scaling
  ZPoly f = zp_mul({Int(-1), Int(1)}, {Int(-28), Int(1)});
  long prec = 12;
  auto fac = qp_factor(f, 3, prec);
  REQUIRE(fac.size() == 2);
  std::vector<Int> roots;
  for (auto& info : fac) {
    REQUIRE(info.degree() == 1);
    // root of a linear leaf modulus y + c is -c
    Int leaf_root = imod(-info.modulus[0], ipow(3, (unsigned long)info.prec));
    Int root = info.a_shift +
               ipow(3, (unsigned long)info.a_scale) * leaf_root;
    roots.push_back(imod(root, ipow(3, (unsigned long)info.prec)));
  }
  Int small = ipow(3, 6);
  std::sort(roots.begin(), roots.end(),
            [&](const Int& a, const Int& b) { return imod(a, small) < imod(b, small); });
  REQUIRE(imod(roots[0], small) == 1);
  REQUIRE(imod(roots[1], small) == 28);

  // minpoly of 1 + 3 sqrt(2) over Q_3: congruent block, unramified after scale
  // x^2 - 2x - 17 = (x - 1)^2 - 18
  auto g = qp_factor({Int(-17), Int(-2), Int(1)}, 3, 14);
  REQUIRE(g.size() == 1);
  REQUIRE(g[0].e == 1);
  REQUIRE(g[0].f0 == 2);
  REQUIRE(g[0].a_shift == 1);
  REQUIRE(g[0].a_scale == 1);

  // minpoly of 1 + sqrt(3): (x - 1)^2 - 3, ramified after shift
  auto h = qp_factor({Int(-2), Int(-2), Int(1)}, 3, 14);
  REQUIRE(h.size() == 1);
  REQUIRE(h[0].e == 2);
  REQUIRE(h[0].f0 == 1);
  REQUIRE(h[0].a_shift == 1);

  // deeper congruence: roots 2 and 2 + 3^4 + 3^5
  ZPoly deep = zp_mul({Int(-2), Int(1)}, {Int(-(2 + 81 + 243)), Int(1)});
  auto d = qp_factor(deep, 3, 16);
  REQUIRE(d.size() == 2);
}

TEST_CASE("QMat basics") {
  QMat m(3, 3);
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(1, 1) = 1;
  m.at(2, 2) = Rat(1, 2);
  REQUIRE(m.rank() == 3);
  QMat inv = m.inverse();
  REQUIRE((m * inv).is_scalar(Rat(1)));

  // kernel of [1 1 1]
  QMat r(1, 3);
  r.at(0, 0) = 1;
  r.at(0, 1) = 1;
  r.at(0, 2) = 1;
  QMat k = r.kernel();
  REQUIRE(k.cols() == 2);
  REQUIRE((r * k).is_zero());
}

TEST_CASE("charpoly via CRT Hessenberg") {
  // companion matrix of x^3 - 2x - 5
  QMat c(3, 3);
  c.at(0, 2) = 5;
  c.at(1, 0) = 1;
  c.at(1, 2) = 2;
  c.at(2, 1) = 1;
  QPoly cp = charpoly(c);
  REQUIRE(cp == QPoly{Rat(-5), Rat(-2), Rat(0), Rat(1)});

  // random integer matrices: charpoly(A) evaluated via trace/det checks
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    long n = 2 + rng() % 4;
    QMat a(n, n);
    Rat tr = 0;
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        a.at(i, j) = Rat((long)(rng() % 41) - 20, 1 + (long)(rng() % 3));
        a.at(i, j).canonicalize();
        if (i == j) tr += a.at(i, j);
      }
    QPoly cpa = charpoly(a);
    REQUIRE(qp_degree(cpa) == n);
    REQUIRE(cpa[n] == 1);
    REQUIRE(cpa[n - 1] == -tr);
    // Cayley-Hamilton on a vector
    QMat v(n, 1);
    for (long i = 0; i < n; ++i) v.at(i, 0) = Rat((long)(rng() % 7) - 3);
    QMat acc(n, 1);
    QMat pw = v;
    for (long i = 0; i <= n; ++i) {
      acc = acc + pw.scaled(cpa[i]);
      pw = a * pw;
    }
    REQUIRE(acc.is_zero());
  }
}
