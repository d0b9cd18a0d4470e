#pragma once

#include "cubicml/padic.hpp"

namespace cubicml {
namespace builtin {

/// Integer family
///   F = T0^2 T1 + T0 T1^2 + T2^3 + T2^2 T3 + T3^3
///     + T1 (T1^2 + T2 T3 + T2^2 + T3^2)
///     + 2 T0 (b0 T2^2 + b1 T2 T3 + b2 T3^2).
IntForm family(int b0, int b1, int b2);

/// The b = (1,1,1) member used throughout the scenario suite.
IntForm family_111();

/// Rescaled model: phi1_transform(family_111()).
IntForm v1_integer();

/// Reduction of v1_integer() mod 2: the four-point surface over GF(2).
FieldForm v1_mod2();

/// Reduction of family_111() mod 2: the one-point surface over GF(2).
FieldForm one_point_mod2();

/// x0^2 x3 + x0 (x1^2 + x1 x2 + x2^2) + x1^3 + x1^2 x2 + x2^3 over GF(2),
/// the tangency-locus worked example.
FieldForm w_mod2();

/// X^3 + Y^3 + Z^3 + T^3 over the integers.
IntForm diagonal();

/// x0^3 + x1^3 + x2^3 + theta x3^3 over GF(4) (theta a generator): the
/// nine-point surface with nine singleton classes.
FieldForm manin_gf4();

/// Same diagonal form over GF(16) via the tower embedding of GF(4).
FieldForm manin_gf16();

/// 2-adic model of the nine-point surface over the unramified quadratic
/// extension at the given precision.
FormT<QuadExtScalar> manin_quadext(unsigned precision);

/// Named lookup used by the `builtin:` surface syntax of the CLI.  Names:
/// family111, v1, v1-mod2, one-point-mod2, w-mod2, diagonal, manin-gf4.
ParsedForm by_name(const std::string& name);

}  // namespace builtin
}  // namespace cubicml
