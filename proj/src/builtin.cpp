#include "cubicml/builtin.hpp"

namespace cubicml {
namespace builtin {

IntForm family(int b0, int b1, int b2) {
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

IntForm family_111() { return family(1, 1, 1); }

IntForm v1_integer() { return phi1_transform(family_111()); }

FieldForm v1_mod2() { return reduce_mod_p(v1_integer(), FieldSpec::get(2, 1)); }

FieldForm one_point_mod2() { return reduce_mod_p(family_111(), FieldSpec::get(2, 1)); }

FieldForm w_mod2() {
  auto f2 = FieldSpec::get(2, 1);
  FieldForm f(3);
  for (Expo e : {Expo{2, 0, 0, 1}, Expo{1, 2, 0, 0}, Expo{1, 1, 1, 0}, Expo{1, 0, 2, 0},
                 Expo{0, 3, 0, 0}, Expo{0, 2, 1, 0}, Expo{0, 0, 3, 0}})
    f.add_term(e, fe(f2, 1));
  return f;
}

IntForm diagonal() {
  IntForm f(3);
  for (int i = 0; i < 4; ++i) {
    Expo e{0, 0, 0, 0};
    e[i] = 3;
    f.add_term(e, BigInt(1));
  }
  return f;
}

FieldForm manin_gf4() {
  auto f4 = FieldSpec::get(2, 2);
  FieldForm f(3);
  for (int i = 0; i < 3; ++i) {
    Expo e{0, 0, 0, 0};
    e[i] = 3;
    f.add_term(e, fe(f4, 1));
  }
  f.add_term({0, 0, 0, 3}, fe(f4, 2));
  return f;
}

FieldForm manin_gf16() {
  auto f4 = FieldSpec::get(2, 2);
  auto f16 = FieldSpec::get(2, 4);
  FieldForm src = manin_gf4();
  return src.map_coeffs<FieldElement>(
      [&](const FieldElement& c) { return embed_tower(c, f16.get()); });
}

FormT<QuadExtScalar> manin_quadext(unsigned precision) {
  FormT<QuadExtScalar> f(3);
  for (int i = 0; i < 3; ++i) {
    Expo e{0, 0, 0, 0};
    e[i] = 3;
    f.add_term(e, QuadExtScalar::from_int(1, precision));
  }
  f.add_term({0, 0, 0, 3}, QuadExtScalar::theta(precision));
  return f;
}

ParsedForm by_name(const std::string& name) {
  ParsedForm pf;
  if (name == "family111" || name == "v1") {
    pf.domain = Domain::Integer;
    pf.int_form = name == "v1" ? v1_integer() : family_111();
    return pf;
  }
  if (name == "diagonal") {
    pf.domain = Domain::Integer;
    pf.int_form = diagonal();
    return pf;
  }
  pf.domain = Domain::Field;
  if (name == "v1-mod2") {
    pf.field_form = v1_mod2();
  } else if (name == "one-point-mod2") {
    pf.field_form = one_point_mod2();
  } else if (name == "w-mod2") {
    pf.field_form = w_mod2();
  } else if (name == "manin-gf4") {
    pf.field_form = manin_gf4();
  } else {
    throw Error("unknown builtin surface: " + name);
  }
  pf.field = FieldSpec::get(2, name == "manin-gf4" ? 2 : 1);
  return pf;
}

}  // namespace builtin
}  // namespace cubicml
