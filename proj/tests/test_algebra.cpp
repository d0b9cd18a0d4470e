#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cubicml/form.hpp"

using namespace cubicml;

TEST_CASE("canonical moduli of small binary fields") {
  CHECK(FieldSpec::get(2, 1)->modulus() == std::vector<unsigned>{0, 1});
  CHECK(FieldSpec::get(2, 2)->modulus() == std::vector<unsigned>{1, 1, 1});
  CHECK(FieldSpec::get(2, 4)->modulus() == std::vector<unsigned>{1, 1, 0, 0, 1});
  CHECK(FieldSpec::get(2, 8)->modulus() == std::vector<unsigned>{1, 1, 0, 1, 1, 0, 0, 0, 1});
  CHECK(FieldSpec::get(3, 1)->modulus() == std::vector<unsigned>{0, 1});
  CHECK(FieldSpec::get(3, 2)->modulus() == std::vector<unsigned>{1, 0, 1});
}

TEST_CASE("GF(4) multiplication table") {
  auto f4 = FieldSpec::get(2, 2);
  // indices: 0, 1, t, t+1 with t^2 = t + 1
  CHECK(f4->mul(2, 2) == 3);
  CHECK(f4->mul(2, 3) == 1);
  CHECK(f4->mul(3, 3) == 2);
  CHECK(f4->inv(2) == 3);
  CHECK(f4->frobenius(2) == 3);
  CHECK(f4->add(2, 3) == 1);
}

TEST_CASE("field laws hold exhaustively on small fields") {
  for (auto [p, m] : {std::pair<unsigned, unsigned>{2, 1}, {2, 2}, {2, 3}, {2, 4},
                      {3, 1}, {3, 2}, {5, 1}, {7, 1}}) {
    auto f = FieldSpec::get(p, m);
    unsigned q = f->q();
    for (unsigned a = 0; a < q; ++a) {
      if (a != 0) {
        CHECK(f->mul(a, f->inv(a)) == 1);
        CHECK(f->pow(a, q - 1) == 1);
      }
      CHECK(f->add(a, f->neg(a)) == 0);
      for (unsigned b = 0; b < q; ++b) {
        CHECK(f->add(a, b) == f->add(b, a));
        CHECK(f->mul(a, b) == f->mul(b, a));
        for (unsigned c = 0; c < q; ++c) {
          CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
          CHECK(f->mul(a, f->mul(b, c)) == f->mul(f->mul(a, b), c));
        }
      }
    }
  }
}

TEST_CASE("tower embeddings are coherent ring maps") {
  auto f2 = FieldSpec::get(2, 1);
  auto f4 = FieldSpec::get(2, 2);
  auto f16 = FieldSpec::get(2, 4);

  CHECK(embed_tower(fe(f2, 1), f4.get()) == fe(f4, 1));
  CHECK(embed_tower(fe(f2, 0), f16.get()) == fe(f16, 0));

  // Ring-map property on all of GF(4) -> GF(16).
  for (unsigned a = 0; a < 4; ++a) {
    for (unsigned b = 0; b < 4; ++b) {
      auto ea = embed_tower(fe(f4, a), f16.get());
      auto eb = embed_tower(fe(f4, b), f16.get());
      CHECK(embed_tower(fe(f4, f4->mul(a, b)), f16.get()) == ea * eb);
      CHECK(embed_tower(fe(f4, f4->add(a, b)), f16.get()) == ea + eb);
    }
  }

  // The image of the GF(4) generator satisfies its modulus in GF(16).
  auto t = embed_tower(fe(f4, 2), f16.get());
  CHECK(t * t + t + fe(f16, 1) == fe(f16, 0));

  // Coherence: GF(2) -> GF(4) -> GF(16) equals GF(2) -> GF(16).
  for (unsigned a = 0; a < 2; ++a) {
    auto via = embed_tower(embed_tower(fe(f2, a), f4.get()), f16.get());
    CHECK(via == embed_tower(fe(f2, a), f16.get()));
  }
}

static IntForm diagonal_cubic(long long c0, long long c1, long long c2, long long c3) {
  IntForm f(3);
  f.add_term({3, 0, 0, 0}, BigInt(c0));
  f.add_term({0, 3, 0, 0}, BigInt(c1));
  f.add_term({0, 0, 3, 0}, BigInt(c2));
  f.add_term({0, 0, 0, 3}, BigInt(c3));
  return f;
}

TEST_CASE("normalized hessian of a diagonal cubic") {
  // det diag(6aX, 6bY, 6cZ, 6dT) / 4 = 324*abcd * XYZT
  IntForm h = hessian_star(diagonal_cubic(1, 1, 1, 2));
  CHECK(h.degree() == 4);
  CHECK(h.term_count() == 1);
  CHECK(*h.coefficient({1, 1, 1, 1}) == BigInt(648));
}

TEST_CASE("hessian respects linear substitution determinant square") {
  // H*(f o M) = det(M)^2 * (H* f) o M for a sample of integer cubics
  // and integer matrices.
  std::mt19937_64 rng(7);
  auto rnd = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (int trial = 0; trial < 25; ++trial) {
    IntForm f(3);
    for (int t = 0; t < 6; ++t) {
      Expo e{0, 0, 0, 0};
      int rem = 3;
      for (int i = 0; i < 3; ++i) {
        int k = rnd(0, rem);
        e[i] = uint8_t(k);
        rem -= k;
      }
      e[3] = uint8_t(rem);
      f.add_term(e, BigInt(rnd(-4, 4)));
    }
    if (f.is_zero()) continue;

    std::array<std::array<BigInt, 4>, 4> M;
    for (auto& row : M)
      for (auto& x : row) x = rnd(-2, 2);
    // 4x4 integer determinant by cofactor expansion.
    auto det3 = [&](int r[3], int c[3]) {
      return M[r[0]][c[0]] * (M[r[1]][c[1]] * M[r[2]][c[2]] - M[r[1]][c[2]] * M[r[2]][c[1]]) -
             M[r[0]][c[1]] * (M[r[1]][c[0]] * M[r[2]][c[2]] - M[r[1]][c[2]] * M[r[2]][c[0]]) +
             M[r[0]][c[2]] * (M[r[1]][c[0]] * M[r[2]][c[1]] - M[r[1]][c[1]] * M[r[2]][c[0]]);
    };
    BigInt det = 0;
    int rows[3] = {1, 2, 3};
    int sign = 1;
    for (int j = 0; j < 4; ++j) {
      int cols[3], k = 0;
      for (int c = 0; c < 4; ++c)
        if (c != j) cols[k++] = c;
      det += sign * M[0][j] * det3(rows, cols);
      sign = -sign;
    }

    IntForm lhs = hessian_star(f.substitute_linear(M));
    IntForm rhs = hessian_star(f).substitute_linear(M).scaled(det * det);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("Euler identity over GF(2^m): sum x_i df/dx_i = 3f") {
  std::mt19937_64 rng(11);
  for (unsigned m : {1u, 2u, 3u}) {
    auto f = FieldSpec::get(2, m);
    for (int trial = 0; trial < 20; ++trial) {
      FieldForm g(3);
      for (int t = 0; t < 8; ++t) {
        Expo e{0, 0, 0, 0};
        int rem = 3;
        for (int i = 0; i < 3; ++i) {
          int k = std::uniform_int_distribution<int>(0, rem)(rng);
          e[i] = uint8_t(k);
          rem -= k;
        }
        e[3] = uint8_t(rem);
        g.add_term(e, fe(f, rng() % f->q()));
      }
      std::array<FieldElement, 4> x{fe(f, unsigned(rng() % f->q())), fe(f, unsigned(rng() % f->q())),
                                    fe(f, unsigned(rng() % f->q())), fe(f, unsigned(rng() % f->q()))};
      FieldElement euler = fe(f, 0);
      for (int i = 0; i < 4; ++i) euler = euler + x[i] * g.partial(i).eval(x);
      FieldElement three_f = g.eval(x);  // 3 = 1 in characteristic 2
      CHECK(euler == three_f);
    }
  }
}

TEST_CASE("surface file parse/emit round trip is canonical") {
  std::string text =
      "# sample integer surface\n"
      "domain int\n"
      "degree 3\n"
      "0 0 0 3 2\n"
      "3 0 0 0 1\n"
      "0 3 0 0 1   # trailing comment\n"
      "0 0 3 0 1\n";
  ParsedForm pf = parse_form(text);
  REQUIRE(pf.domain == Domain::Integer);
  std::string canon = emit_form(pf);
  CHECK(canon == emit_form(parse_form(canon)));
  CHECK(canon.find("3 0 0 0 1") != std::string::npos);
  // Canonical order is ascending lexicographic on exponent tuples.
  CHECK(canon.find("0 0 0 3 2") < canon.find("0 0 3 0 1"));
  CHECK(canon.find("0 0 3 0 1") < canon.find("3 0 0 0 1"));

  std::string gf_text =
      "domain gf 2 2\n"
      "degree 3\n"
      "1 1 1 0 [0,1]\n"
      "0 0 0 3 [1,0]\n";
  std::string gf_canon = emit_form(parse_form(gf_text));
  CHECK(gf_canon == emit_form(parse_form(gf_canon)));

  std::string padic_text =
      "domain padic 16\n"
      "degree 3\n"
      "3 0 0 0 1\n"
      "0 3 0 0 65535\n";
  std::string padic_canon = emit_form(parse_form(padic_text));
  CHECK(padic_canon == emit_form(parse_form(padic_canon)));

  CHECK_THROWS_AS(parse_form("domain int\ndegree 3\n1 1 0 0 5\n"), Error);
  CHECK_THROWS_AS(parse_form("domain blah\ndegree 3\n"), Error);
  CHECK_THROWS_AS(parse_form("domain int\ndegree 3\n"), Error);
  CHECK_THROWS_AS(parse_form("domain int\ndegree 3\n3 0 0 0 x\n"), Error);
}

TEST_CASE("truncated 2-adic scalars") {
  PadicScalar a(12, 16);
  CHECK(a.valuation() == 2);
  CHECK(!a.is_unit());
  PadicScalar u(5, 16);
  CHECK((u * u.inverse()).residue() == 1);
  CHECK((u - u).at_valuation_cap());
  CHECK(a.shifted_down(2).residue() == 3);

  // Newton inversion at full 64-bit precision.
  PadicScalar w(0x123456789abcdef1ull, 64);
  CHECK((w * w.inverse()).residue() == 1);
}

TEST_CASE("quadratic extension scalars") {
  unsigned n = 20;
  QuadExtScalar t = QuadExtScalar::theta(n);
  QuadExtScalar one = QuadExtScalar::from_int(1, n);
  CHECK(t * t + t + one == QuadExtScalar::from_int(0, n));
  CHECK(t.conj() == -one - t);

  QuadExtScalar x(PadicScalar(7, n), PadicScalar(3, n));
  // norm(a + b t) = a^2 - ab + b^2
  CHECK(x.norm_base().residue() == ((7 * 7 - 7 * 3 + 3 * 3) & ((1u << n) - 1)));
  CHECK((x * x.inverse()) == one);
  CHECK(!x.is_base_rational());
  CHECK(x.mod2_gf4() == 3);
}

TEST_CASE("reductions between coefficient domains") {
  IntForm f = diagonal_cubic(1, 1, 1, -1);
  auto f2 = FieldSpec::get(2, 1);
  FieldForm g = reduce_mod_p(f, f2);
  CHECK(g.term_count() == 4);
  CHECK(*g.coefficient({0, 0, 0, 3}) == fe(f2, 1));

  FormT<PadicScalar> h = reduce_mod_2n(f, 8);
  CHECK(h.coefficient({0, 0, 0, 3})->residue() == 255);
  FormT<QuadExtScalar> w = widen_to_quad_ext(h);
  CHECK(w.coefficient({3, 0, 0, 0})->is_base_rational());
}
