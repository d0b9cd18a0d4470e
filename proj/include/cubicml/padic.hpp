#pragma once

#include "cubicml/geometry.hpp"

namespace cubicml {

/// Point with coordinates in a truncated 2-adic ring; the designated
/// coordinate is a unit normalized to exactly 1.
template <class R>
struct PadicPointT {
  std::array<R, 4> x;
  int unit_coord = 0;

  void normalize() {
    if (!x[unit_coord].is_unit()) throw Error("padic point: designated coordinate is not a unit");
    R inv = x[unit_coord].inverse();
    for (int i = 0; i < 4; ++i) x[i] = x[i] * inv;
  }
};

using PadicPoint = PadicPointT<PadicScalar>;
using PadicPointQ = PadicPointT<QuadExtScalar>;

PadicPointQ conj_point(const PadicPointQ& p);

/// Reduce a point mod 2; PadicScalar lands in GF(2), QuadExtScalar in
/// GF(4) (theta maps to the generator).
ProjPoint reduce_point_mod2(const PadicPoint& p);
ProjPoint reduce_point_mod2(const PadicPointQ& p);

FieldForm reduce_form_mod2(const FormT<PadicScalar>& f);
FieldForm reduce_form_mod2(const FormT<QuadExtScalar>& f);

/// Newton iteration log: residual valuation before each step.  Quadratic
/// convergence (valuation at least doubles) is asserted by the lifter.
struct LiftLog {
  std::vector<unsigned> residual_valuations;
};

/// Solve coordinate `solved` of F = 0 by Newton from the given start
/// vector; all other coordinates are kept exactly.  The partial at
/// `solved` must be a unit at the start.
template <class R>
PadicPointT<R> hensel_lift_point(const FormT<R>& f, std::array<R, 4> start, int unit_coord,
                                 int solved, LiftLog* log = nullptr);

/// Pick a solvable coordinate: smallest index != unit_coord whose partial
/// is a unit at the start.  Exists whenever the reduction is smooth.
template <class R>
int choose_solved_coord(const FormT<R>& f, const std::array<R, 4>& start, int unit_coord);

/// Line in chart form: dependent coordinates dep[0], dep[1] are expressed
/// in the independent ones ind[0], ind[1]:
///   x_dep0 = a x_ind0 + b x_ind1,   x_dep1 = c x_ind0 + d x_ind1
/// with (a, b, c, d) stored as coef.  ind/dep record the coordinate
/// permutation used when the standard chart (x2, x3 over x0, x1) is
/// degenerate for the given line.
struct LineChart {
  std::array<int, 2> ind{0, 1}, dep{2, 3};
  std::array<PadicScalar, 4> coef;

  /// Spanning pencil rows in original coordinates.
  std::array<std::array<PadicScalar, 4>, 2> rows(unsigned precision) const;
};

/// Lift a rational line of the smooth reduction to a line on V by Newton
/// iteration on the four coefficients of the restricted binary cubic.
/// An optional start overrides the default integer lift of the chart
/// coefficients; it must agree with the reduced line mod 2.  Quadratic
/// convergence makes the result independent of the choice.
LineChart hensel_lift_line(const FormT<PadicScalar>& f, const ProjLine& reduced,
                           const std::array<PadicScalar, 4>* start = nullptr);

struct LiftedTriple {
  PadicPoint p1, p2, p3;
  unsigned loss = 0;
};

/// Lift a transversal collinear triple of the reduction pointwise; the
/// third point is recovered by Vieta deflation on the lifted secant.
LiftedTriple lift_collinear_triple(const FormT<PadicScalar>& f, const ProjPoint& t1,
                                   const ProjPoint& t2, const ProjPoint& t3);

template <class R>
struct ThirdPoint {
  PadicPointT<R> point;
  unsigned loss = 0;  // bits of precision spent on the leading-coefficient division
};

/// Third intersection of the secant through P1 and P2 with F = 0: the
/// restriction is s*t*(g1*s + g2*t), and the third root is (g2 : -g1).
template <class R>
ThirdPoint<R> collinear_third_padic(const FormT<R>& f, const PadicPointT<R>& p1,
                                    const PadicPointT<R>& p2);

/// Coordinate substitution diag(1, 8, 2, 2) followed by exact division of
/// every coefficient by 8.
IntForm phi1_transform(const IntForm& f);

enum class ClassTag { X0, X1 };

/// Class functional on the transformed surface: X0 when the reduction's
/// quadratic marker Q(t2, t3) = t2^2 + t2 t3 + t3^2 vanishes mod 2.
ClassTag classify_A(const IntForm& f1, const PadicPoint& p);

struct ExperimentRow {
  unsigned depth;
  unsigned v_min;          // min coordinate valuation of r_i - R
  bool rational_line;      // secant chart coefficients lie in the base ring
  bool third_base_rational;
  unsigned loss_bits;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  bool nondecreasing = false;
  PadicPointQ limit_point;  // R: residual intersection of the limit tangent line
};

/// Perturb the free coordinate of a base-rational point by theta*2^i,
/// re-solve onto the surface, and track how fast the secant third point
/// r_i approaches the tangent-line residual point R.
ExperimentResult tangent_limit_experiment(const FormT<QuadExtScalar>& f, const PadicPointQ& p,
                                          int free_coord, unsigned depth);

}  // namespace cubicml
