#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cubicml/padic.hpp"

using namespace cubicml;

namespace {

IntForm fermat_int() {
  IntForm f(3);
  for (int i = 0; i < 4; ++i) {
    Expo e{0, 0, 0, 0};
    e[i] = 3;
    f.add_term(e, BigInt(1));
  }
  return f;
}

// T0^2 T1 + T0 T1^2 + T2^3 + T2^2 T3 + T3^3 + T1 (T1^2 + T2 T3 + T2^2 + T3^2)
//   + 2 T0 (b0 T2^2 + b1 T2 T3 + b2 T3^2)
IntForm family_f(int b0, int b1, int b2) {
  IntForm f(3);
  f.add_term({2, 1, 0, 0}, BigInt(1));
  f.add_term({1, 2, 0, 0}, BigInt(1));
  f.add_term({0, 0, 3, 0}, BigInt(1));
  f.add_term({0, 0, 2, 1}, BigInt(1));
  f.add_term({0, 0, 0, 3}, BigInt(1));
  f.add_term({0, 3, 0, 0}, BigInt(1));
  f.add_term({0, 1, 1, 1}, BigInt(1));
  f.add_term({0, 1, 2, 0}, BigInt(1));
  f.add_term({0, 1, 0, 2}, BigInt(1));
  f.add_term({1, 0, 2, 0}, BigInt(2 * b0));
  f.add_term({1, 0, 1, 1}, BigInt(2 * b1));
  f.add_term({1, 0, 0, 2}, BigInt(2 * b2));
  return f;
}

ProjPoint pt(const std::shared_ptr<const FieldSpec>& s, unsigned a, unsigned b, unsigned c,
             unsigned d) {
  return make_point(s, {a, b, c, d});
}

PadicScalar ps(uint64_t v, unsigned n) { return PadicScalar(v, n); }

PadicPoint ppoint(std::array<uint64_t, 4> v, unsigned n, int unit_coord) {
  PadicPoint p;
  for (int i = 0; i < 4; ++i) p.x[i] = ps(v[i], n);
  p.unit_coord = unit_coord;
  p.normalize();
  return p;
}

// x0^3 + x1^3 + x2^3 + theta * x3^3 over the quadratic extension.
FormT<QuadExtScalar> manin_quadext(unsigned n) {
  FormT<QuadExtScalar> f(3);
  for (int i = 0; i < 3; ++i) {
    Expo e{0, 0, 0, 0};
    e[i] = 3;
    f.add_term(e, QuadExtScalar::from_int(1, n));
  }
  f.add_term({0, 0, 0, 3}, QuadExtScalar::theta(n));
  return f;
}

}  // namespace

TEST_CASE("point lift by Newton iteration: exact cube-root solution") {
  unsigned n = 32;
  FormT<PadicScalar> f = reduce_mod_2n(fermat_int(), n);
  std::array<PadicScalar, 4> start{ps(1, n), ps(1, n), ps(0, n), ps(0, n)};

  CHECK(choose_solved_coord(f, start, 0) == 1);
  LiftLog log;
  PadicPoint p = hensel_lift_point(f, start, 0, 1, &log);

  // 1 + y^3 = 0 has the exact solution y = -1.
  CHECK(p.x[0].residue() == 1);
  CHECK(p.x[1].residue() == ps(uint64_t(-1), n).residue());
  CHECK(p.x[2].residue() == 0);
  CHECK(p.x[3].residue() == 0);
  CHECK(f.eval(p.x).is_zero());
  CHECK(reduce_point_mod2(p) == pt(FieldSpec::get(2, 1), 1, 1, 0, 0));

  // Residual valuation at least doubles along the Newton trace.
  REQUIRE(log.residual_valuations.size() >= 2);
  for (size_t i = 0; i + 1 < log.residual_valuations.size(); ++i) {
    unsigned v = log.residual_valuations[i], w = log.residual_valuations[i + 1];
    CHECK(w >= std::min(2 * v, n));
  }

  // Free coordinates are preserved exactly.
  std::array<PadicScalar, 4> start2{ps(1, n), ps(1, n), ps(4, n), ps(0, n)};
  PadicPoint p2 = hensel_lift_point(f, start2, 0, 1);
  CHECK(p2.x[2].residue() == 4);
  CHECK(f.eval(p2.x).is_zero());

  // Solving a coordinate whose partial vanishes mod 2 must fail.
  CHECK_THROWS_AS(hensel_lift_point(f, start, 0, 2), Error);
  // A start that does not reduce onto the surface must fail.
  std::array<PadicScalar, 4> off{ps(1, n), ps(0, n), ps(0, n), ps(0, n)};
  CHECK_THROWS_AS(hensel_lift_point(f, off, 0, 1), Error);
}

TEST_CASE("line lift: diagonal surface secant plane chart") {
  unsigned n = 32;
  FormT<PadicScalar> f = reduce_mod_2n(fermat_int(), n);
  auto f2 = FieldSpec::get(2, 1);
  ProjLine reduced = ProjLine::through(pt(f2, 1, 1, 0, 0), pt(f2, 0, 0, 1, 1));
  REQUIRE(reduced.pivots() == std::array<int, 2>{0, 2});

  LineChart chart = hensel_lift_line(f, reduced);
  CHECK(chart.ind == std::array<int, 2>{0, 2});
  CHECK(chart.dep == std::array<int, 2>{1, 3});
  // x1 = -x0 and x3 = -x2: the integer line X+Y = Z+T = 0.
  uint64_t minus1 = ps(uint64_t(-1), n).residue();
  CHECK(chart.coef[0].residue() == minus1);
  CHECK(chart.coef[1].residue() == 0);
  CHECK(chart.coef[2].residue() == 0);
  CHECK(chart.coef[3].residue() == minus1);

  auto rows = chart.rows(n);
  for (const PadicScalar& c : restrict_to_pencil(f, rows[0], rows[1])) CHECK(c.is_zero());

  // Same fixed point from a different starting lift.
  std::array<PadicScalar, 4> other{ps(3, n), ps(2, n), ps(2, n), ps(5, n)};
  LineChart chart2 = hensel_lift_line(f, reduced, &other);
  CHECK(chart2.coef == chart.coef);

  // A start incongruent to the line mod 2 is rejected.
  std::array<PadicScalar, 4> wrong{ps(0, n), ps(0, n), ps(0, n), ps(1, n)};
  CHECK_THROWS_AS(hensel_lift_line(f, reduced, &wrong), Error);

  // A line that misses the reduction is rejected.
  ProjLine off = ProjLine::through(pt(f2, 1, 0, 0, 0), pt(f2, 0, 1, 0, 0));
  CHECK_THROWS_AS(hensel_lift_line(f, off), Error);
}

TEST_CASE("line lift: uniqueness over random surfaces containing a line") {
  unsigned n = 24;
  auto f2 = FieldSpec::get(2, 1);
  ProjLine reduced = ProjLine::through(pt(f2, 1, 0, 0, 0), pt(f2, 0, 1, 0, 0));

  std::mt19937 rng(20260826);
  std::uniform_int_distribution<int> coin(0, 7);
  int accepted = 0, attempts = 0;
  while (accepted < 20 && attempts < 400) {
    ++attempts;
    // Random cubic whose reduction contains {x2 = x3 = 0}: monomials pure
    // in x0, x1 get even coefficients, all others are unconstrained.  The
    // integer model itself misses the line, so the lift is non-trivial.
    IntForm g(3);
    for (unsigned e0 = 0; e0 <= 3; ++e0)
      for (unsigned e1 = 0; e0 + e1 <= 3; ++e1)
        for (unsigned e2 = 0; e0 + e1 + e2 <= 3; ++e2) {
          unsigned e3 = 3 - e0 - e1 - e2;
          int c = coin(rng);
          if (e2 == 0 && e3 == 0) c *= 2;
          g.add_term({uint8_t(e0), uint8_t(e1), uint8_t(e2), uint8_t(e3)}, BigInt(c));
        }
    if (g.is_zero()) continue;
    FormT<PadicScalar> f = reduce_mod_2n(g, n);
    if (f.is_zero()) continue;

    LineChart chart;
    try {
      chart = hensel_lift_line(f, reduced);
    } catch (const Error&) {
      continue;  // singular Jacobian for this draw
    }
    ++accepted;

    auto rows = chart.rows(n);
    for (const PadicScalar& c : restrict_to_pencil(f, rows[0], rows[1])) CHECK(c.is_zero());

    std::array<PadicScalar, 4> other{chart.coef[0] + ps(2, n), chart.coef[1] + ps(6, n),
                                     chart.coef[2] + ps(4, n), chart.coef[3] + ps(2, n)};
    LineChart chart2 = hensel_lift_line(f, reduced, &other);
    CHECK(chart2.coef == chart.coef);
  }
  CHECK(accepted == 20);
}

TEST_CASE("third intersection point: exact secant computation") {
  unsigned n = 32;
  FormT<PadicScalar> f = reduce_mod_2n(fermat_int(), n);
  PadicPoint p1 = ppoint({1, uint64_t(-1), 0, 0}, n, 0);
  PadicPoint p2 = ppoint({1, 0, uint64_t(-1), 0}, n, 0);

  // Restriction of the secant is 3 s t (s + t): third root at (1 : -1).
  ThirdPoint<PadicScalar> third = collinear_third_padic(f, p1, p2);
  CHECK(third.loss == 0);
  CHECK(third.point.x[0].residue() == 0);
  CHECK(third.point.x[1].residue() == 1);
  CHECK(third.point.x[2].residue() == ps(uint64_t(-1), n).residue());
  CHECK(third.point.x[3].residue() == 0);
  CHECK(f.eval(third.point.x).is_zero());

  CHECK_THROWS_AS(collinear_third_padic(f, p1, p1), Error);

  // A secant lying on the surface exhausts the precision budget.
  PadicPoint p3 = ppoint({0, 0, 1, uint64_t(-1)}, n, 2);
  CHECK_THROWS_AS(collinear_third_padic(f, p1, p3), Error);
}

TEST_CASE("collinear triple lift and reduction compatibility") {
  unsigned n = 32;
  FormT<PadicScalar> f = reduce_mod_2n(fermat_int(), n);
  auto f2 = FieldSpec::get(2, 1);
  ProjPoint a = pt(f2, 1, 1, 0, 0), b = pt(f2, 1, 0, 1, 0), c = pt(f2, 0, 1, 1, 0);

  LiftedTriple lift = lift_collinear_triple(f, a, b, c);
  CHECK(lift.loss == 0);
  CHECK(reduce_point_mod2(lift.p1) == a);
  CHECK(reduce_point_mod2(lift.p2) == b);
  CHECK(reduce_point_mod2(lift.p3) == c);
  CHECK(f.eval(lift.p1.x).is_zero());
  CHECK(f.eval(lift.p2.x).is_zero());
  CHECK(f.eval(lift.p3.x).is_zero());

  // Reduction of the lifted third matches the finite-field third point.
  Surface reduction(reduce_form_mod2(f), f2);
  auto downstairs = reduction.collinear_third(a, b);
  REQUIRE(downstairs.kind == Surface::Collinear::Point);
  CHECK(*downstairs.point == reduce_point_mod2(lift.p3));

  // Unordered permutation invariance of the lifted triple.
  LiftedTriple swapped = lift_collinear_triple(f, b, a, c);
  CHECK(swapped.p1.x == lift.p2.x);
  CHECK(swapped.p2.x == lift.p1.x);
  CHECK(swapped.p3.x == lift.p3.x);

  // A secant lying on the reduction is not liftable this way.
  ProjPoint d = pt(f2, 0, 0, 1, 1);
  CHECK_THROWS_AS(lift_collinear_triple(f, a, d, pt(f2, 1, 1, 1, 1)), Error);
}

TEST_CASE("coordinate rescaling transform and its reduction") {
  IntForm f111 = family_f(1, 1, 1);
  IntForm g = phi1_transform(f111);

  auto f2 = FieldSpec::get(2, 1);
  FieldForm expect(3);
  for (Expo e : {Expo{2, 1, 0, 0}, Expo{1, 0, 2, 0}, Expo{1, 0, 1, 1}, Expo{1, 0, 0, 2},
                 Expo{0, 0, 3, 0}, Expo{0, 0, 2, 1}, Expo{0, 0, 0, 3}})
    expect.add_term(e, fe(f2, 1));
  CHECK(reduce_mod_p(g, f2) == expect);
  CHECK(reduce_mod_p(phi1_transform(family_f(3, 1, 1)), f2) == expect);

  // The unit coefficient of T0^2 T1 survives the transform for every
  // member of the family.
  for (int b0 = 0; b0 < 4; ++b0)
    for (int b1 = 0; b1 < 4; ++b1) {
      IntForm h = phi1_transform(family_f(b0, b1, 2));
      auto lead = h.coefficient({2, 1, 0, 0});
      REQUIRE(lead.has_value());
      CHECK(*lead % 2 == 1);
    }

  CHECK_THROWS_AS(phi1_transform(fermat_int()), Error);
}

TEST_CASE("class functional on the transformed surface") {
  IntForm f111 = family_f(1, 1, 1);
  IntForm g = phi1_transform(f111);
  unsigned n = 16;

  CHECK(classify_A(g, ppoint({1, 2, 4, 8}, n, 0)) == ClassTag::X0);
  CHECK(classify_A(g, ppoint({1, 0, 1, 1}, n, 0)) == ClassTag::X1);
  CHECK(classify_A(g, ppoint({1, 4, 1, 2}, n, 0)) == ClassTag::X1);
  CHECK_THROWS_AS(classify_A(g, ppoint({1, 1, 0, 0}, n, 0)), Error);
}

TEST_CASE("conjugation equivariance of the quadratic-extension third point") {
  unsigned n = 48;
  FormT<QuadExtScalar> f = manin_quadext(n);

  PadicPointQ p;
  p.unit_coord = 0;
  p.x = {QuadExtScalar::from_int(1, n), QuadExtScalar::from_int(-1, n),
         QuadExtScalar::from_int(0, n), QuadExtScalar::from_int(0, n)};

  std::array<QuadExtScalar, 4> start = p.x;
  start[2] = start[2] + QuadExtScalar(PadicScalar(0, n), PadicScalar(4, n));  // + theta*4
  PadicPointQ q = hensel_lift_point(f, start, 0, 1);
  PadicPointQ cq = conj_point(q);
  CHECK(f.eval(cq.x).is_zero());

  ThirdPoint<QuadExtScalar> t1 = collinear_third_padic(f, q, cq);
  ThirdPoint<QuadExtScalar> t2 = collinear_third_padic(f, cq, q);
  CHECK(t1.point.x == t2.point.x);
  CHECK(t1.loss == t2.loss);
  CHECK(conj_point(t1.point).x == t1.point.x);
  for (int i = 0; i < 4; ++i) CHECK(t1.point.x[i].is_base_rational());
}

TEST_CASE("tangent limit experiment on the nine-point diagonal cubic") {
  unsigned n = 48;
  FormT<QuadExtScalar> f = manin_quadext(n);

  PadicPointQ p;
  p.unit_coord = 0;
  p.x = {QuadExtScalar::from_int(1, n), QuadExtScalar::from_int(-1, n),
         QuadExtScalar::from_int(0, n), QuadExtScalar::from_int(0, n)};

  ExperimentResult res = tangent_limit_experiment(f, p, 2, 8);
  REQUIRE(res.rows.size() == 8);
  CHECK(res.nondecreasing);

  // The limit tangent line meets the surface in the cycle 3P, so the
  // residual point is the base point itself.
  CHECK(res.limit_point.x[0] == QuadExtScalar::from_int(1, n));
  CHECK(res.limit_point.x[1] == QuadExtScalar::from_int(-1, n));
  CHECK(res.limit_point.x[2].is_zero());
  CHECK(res.limit_point.x[3].is_zero());

  for (const ExperimentRow& row : res.rows) {
    CHECK(row.v_min == row.depth);
    CHECK(row.loss_bits == 3 * row.depth);
    CHECK(row.rational_line);
    CHECK(row.third_base_rational);
  }

  CHECK_THROWS_AS(tangent_limit_experiment(f, p, 2, n / 2 + 1), Error);
  CHECK_THROWS_AS(tangent_limit_experiment(f, p, 0, 4), Error);

  PadicPointQ off = p;
  off.x[1] = QuadExtScalar::from_int(1, n);
  CHECK_THROWS_AS(tangent_limit_experiment(f, off, 2, 4), Error);
}
