#include "cubicml/padic.hpp"

#include <algorithm>

namespace cubicml {

namespace {

template <class R>
unsigned precision_of(const FormT<R>& f) {
  if (f.is_zero()) throw Error("padic form is identically zero");
  return f.terms().begin()->second.precision();
}

template <class R>
unsigned cap_valuation(const R& x) {
  return x.valuation();  // already capped at the precision for both scalar types
}

}  // namespace

PadicPointQ conj_point(const PadicPointQ& p) {
  PadicPointQ out = p;
  for (int i = 0; i < 4; ++i) out.x[i] = p.x[i].conj();
  return out;
}

ProjPoint reduce_point_mod2(const PadicPoint& p) {
  auto spec = FieldSpec::get(2, 1);
  return make_point(spec, {unsigned(p.x[0].mod2()), unsigned(p.x[1].mod2()),
                           unsigned(p.x[2].mod2()), unsigned(p.x[3].mod2())});
}

ProjPoint reduce_point_mod2(const PadicPointQ& p) {
  auto spec = FieldSpec::get(2, 2);
  return make_point(spec, {p.x[0].mod2_gf4(), p.x[1].mod2_gf4(), p.x[2].mod2_gf4(),
                           p.x[3].mod2_gf4()});
}

FieldForm reduce_form_mod2(const FormT<PadicScalar>& f) {
  auto spec = FieldSpec::get(2, 1);
  return f.map_coeffs<FieldElement>([&](const PadicScalar& c) { return fe(spec, c.mod2()); });
}

FieldForm reduce_form_mod2(const FormT<QuadExtScalar>& f) {
  auto spec = FieldSpec::get(2, 2);
  return f.map_coeffs<FieldElement>(
      [&](const QuadExtScalar& c) { return fe(spec, c.mod2_gf4()); });
}

template <class R>
int choose_solved_coord(const FormT<R>& f, const std::array<R, 4>& start, int unit_coord) {
  for (int i = 0; i < 4; ++i) {
    if (i == unit_coord) continue;
    if (f.partial(i).eval(start).is_unit()) return i;
  }
  throw Error("hensel point lift: no unit partial derivative away from the unit coordinate");
}

template <class R>
PadicPointT<R> hensel_lift_point(const FormT<R>& f, std::array<R, 4> start, int unit_coord,
                                 int solved, LiftLog* log) {
  if (unit_coord < 0 || unit_coord > 3 || solved < 0 || solved > 3 || unit_coord == solved)
    throw Error("hensel point lift: bad coordinate indices");
  if (!start[unit_coord].is_unit())
    throw Error("hensel point lift: designated coordinate is not a unit");
  unsigned n = precision_of(f);
  FormT<R> fs = f.partial(solved);
  if (!fs.eval(start).is_unit())
    throw Error("hensel point lift: partial derivative at the solved coordinate is not a unit");

  R r = f.eval(start);
  unsigned v = cap_valuation(r);
  if (v == 0) throw Error("hensel point lift: start does not reduce onto the surface");
  while (!r.is_zero()) {
    if (log) log->residual_valuations.push_back(v);
    start[solved] = start[solved] - r * fs.eval(start).inverse();
    r = f.eval(start);
    unsigned nv = r.is_zero() ? n : cap_valuation(r);
    if (nv < std::min(2 * v, n)) throw Error("hensel point lift: Newton iteration stalled");
    v = nv;
  }
  if (log) log->residual_valuations.push_back(n);

  PadicPointT<R> out;
  out.x = start;
  out.unit_coord = unit_coord;
  out.normalize();
  return out;
}

template int choose_solved_coord<PadicScalar>(const FormT<PadicScalar>&,
                                              const std::array<PadicScalar, 4>&, int);
template int choose_solved_coord<QuadExtScalar>(const FormT<QuadExtScalar>&,
                                                const std::array<QuadExtScalar, 4>&, int);
template PadicPointT<PadicScalar> hensel_lift_point<PadicScalar>(
    const FormT<PadicScalar>&, std::array<PadicScalar, 4>, int, int, LiftLog*);
template PadicPointT<QuadExtScalar> hensel_lift_point<QuadExtScalar>(
    const FormT<QuadExtScalar>&, std::array<QuadExtScalar, 4>, int, int, LiftLog*);

std::array<std::array<PadicScalar, 4>, 2> LineChart::rows(unsigned precision) const {
  PadicScalar zero(0, precision), one(1, precision);
  std::array<std::array<PadicScalar, 4>, 2> m{{{zero, zero, zero, zero},
                                               {zero, zero, zero, zero}}};
  m[0][ind[0]] = one;
  m[0][dep[0]] = coef[0];
  m[0][dep[1]] = coef[2];
  m[1][ind[1]] = one;
  m[1][dep[0]] = coef[1];
  m[1][dep[1]] = coef[3];
  return m;
}

namespace {

/// Solve the 4x4 system J*delta = rhs over Z/2^n; pivots must be units.
std::array<PadicScalar, 4> solve4(std::array<std::array<PadicScalar, 4>, 4> J,
                                  std::array<PadicScalar, 4> rhs) {
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int row = col; row < 4; ++row)
      if (J[row][col].is_unit()) {
        piv = row;
        break;
      }
    if (piv < 0) throw Error("line lift: Jacobian is singular mod 2");
    std::swap(J[col], J[piv]);
    std::swap(rhs[col], rhs[piv]);
    PadicScalar inv = J[col][col].inverse();
    for (int j = col; j < 4; ++j) J[col][j] = J[col][j] * inv;
    rhs[col] = rhs[col] * inv;
    for (int row = 0; row < 4; ++row) {
      if (row == col || J[row][col].is_zero()) continue;
      PadicScalar m = J[row][col];
      for (int j = col; j < 4; ++j) J[row][j] = J[row][j] - m * J[col][j];
      rhs[row] = rhs[row] - m * rhs[col];
    }
  }
  return rhs;
}

}  // namespace

LineChart hensel_lift_line(const FormT<PadicScalar>& f, const ProjLine& reduced,
                           const std::array<PadicScalar, 4>* start) {
  unsigned n = precision_of(f);
  const FieldSpec* spec = reduced.row0()[0].spec();
  if (spec->q() != 2) throw Error("line lift: reduction must live over GF(2)");

  FieldForm fbar = reduce_form_mod2(f);
  {
    std::array<FieldElement, 4> A = reduced.row0(), B = reduced.row1();
    for (const FieldElement& c : restrict_to_pencil(fbar, A, B))
      if (!c.is_zero()) throw Error("line lift: line does not lie on the reduction");
  }

  LineChart chart;
  chart.ind = reduced.pivots();
  int d = 0;
  for (int i = 0; i < 4; ++i)
    if (i != chart.ind[0] && i != chart.ind[1]) chart.dep[d++] = i;
  chart.coef = {PadicScalar(reduced.row0()[chart.dep[0]].index(), n),
                PadicScalar(reduced.row1()[chart.dep[0]].index(), n),
                PadicScalar(reduced.row0()[chart.dep[1]].index(), n),
                PadicScalar(reduced.row1()[chart.dep[1]].index(), n)};
  if (start) {
    for (int k = 0; k < 4; ++k)
      if (((*start)[k].residue() ^ chart.coef[k].residue()) & 1)
        throw Error("line lift: start does not reduce to the given line");
    chart.coef = *start;
  }

  FormT<PadicScalar> f2 = f.partial(chart.dep[0]), f3 = f.partial(chart.dep[1]);
  PadicScalar zero(0, n);
  unsigned prev = 0;
  for (int iter = 0; iter < 200; ++iter) {
    auto rows = chart.rows(n);
    std::vector<PadicScalar> g = restrict_to_pencil(f, rows[0], rows[1]);
    unsigned v = n;
    for (const PadicScalar& c : g) v = std::min(v, c.valuation());
    if (v >= n) return chart;
    if (iter == 0) {
      if (v == 0) throw Error("line lift: start does not reduce onto the surface");
    } else if (v < std::min(2 * prev, n)) {
      throw Error("line lift: Newton iteration stalled");
    }
    prev = v;

    std::vector<PadicScalar> h2 = restrict_to_pencil(f2, rows[0], rows[1]);
    std::vector<PadicScalar> h3 = restrict_to_pencil(f3, rows[0], rows[1]);
    // columns: d/da, d/db, d/dc, d/dd; rows k = coefficient of s^(3-k) t^k
    std::array<std::array<PadicScalar, 4>, 4> J{{{zero, zero, zero, zero},
                                                 {zero, zero, zero, zero},
                                                 {zero, zero, zero, zero},
                                                 {zero, zero, zero, zero}}};
    for (int k = 0; k < 4; ++k) {
      if (k < 3) {
        J[k][0] = h2[k];
        J[k][2] = h3[k];
      }
      if (k > 0) {
        J[k][1] = h2[k - 1];
        J[k][3] = h3[k - 1];
      }
    }
    std::array<PadicScalar, 4> rhs{-g[0], -g[1], -g[2], -g[3]};
    std::array<PadicScalar, 4> delta = solve4(J, rhs);
    for (int k = 0; k < 4; ++k) chart.coef[k] = chart.coef[k] + delta[k];
  }
  throw Error("line lift: Newton did not converge");
}

template <class R>
ThirdPoint<R> collinear_third_padic(const FormT<R>& f, const PadicPointT<R>& p1,
                                    const PadicPointT<R>& p2) {
  if (p1.x == p2.x) throw Error("collinear third: points coincide");
  std::vector<R> g = restrict_to_pencil(f, p1.x, p2.x);
  if (!g[0].is_zero() || !g[3].is_zero())
    throw Error("collinear third: input points are not on the surface at full precision");

  unsigned l1 = cap_valuation(g[1]), l2 = cap_valuation(g[2]);
  unsigned loss = std::min(l1, l2);
  unsigned n = precision_of(f);
  if (loss >= n) throw Error("collinear third: precision exhausted");
  R c1 = g[1].shifted_down(loss), c2 = g[2].shifted_down(loss);

  PadicPointT<R> out;
  for (int i = 0; i < 4; ++i) out.x[i] = c2 * p1.x[i] - c1 * p2.x[i];

  // The pencil parameters of the secant can share a power of 2 when the
  // two points are congruent mod 2 (tangent configurations).
  unsigned extra = n;
  for (int i = 0; i < 4; ++i) extra = std::min(extra, cap_valuation(out.x[i]));
  if (extra >= n) throw Error("collinear third: precision exhausted");
  if (extra > 0) {
    for (int i = 0; i < 4; ++i) out.x[i] = out.x[i].shifted_down(extra);
    loss += extra;
  }

  out.unit_coord = -1;
  for (int i = 0; i < 4; ++i)
    if (out.x[i].is_unit()) {
      out.unit_coord = i;
      break;
    }
  if (out.unit_coord < 0) throw Error("collinear third: no unit coordinate");
  out.normalize();
  return {out, loss};
}

template ThirdPoint<PadicScalar> collinear_third_padic<PadicScalar>(
    const FormT<PadicScalar>&, const PadicPointT<PadicScalar>&, const PadicPointT<PadicScalar>&);
template ThirdPoint<QuadExtScalar> collinear_third_padic<QuadExtScalar>(
    const FormT<QuadExtScalar>&, const PadicPointT<QuadExtScalar>&,
    const PadicPointT<QuadExtScalar>&);

namespace {

PadicPoint lift_one_point(const FormT<PadicScalar>& f, const ProjPoint& p, unsigned n) {
  std::array<PadicScalar, 4> start{PadicScalar(p[0].index(), n), PadicScalar(p[1].index(), n),
                                   PadicScalar(p[2].index(), n), PadicScalar(p[3].index(), n)};
  int unit_coord = 0;
  while (p[unit_coord].is_zero()) ++unit_coord;
  int solved = choose_solved_coord(f, start, unit_coord);
  return hensel_lift_point(f, start, unit_coord, solved);
}

}  // namespace

LiftedTriple lift_collinear_triple(const FormT<PadicScalar>& f, const ProjPoint& t1,
                                   const ProjPoint& t2, const ProjPoint& t3) {
  unsigned n = precision_of(f);
  if (t1 == t2 || t1 == t3 || t2 == t3)
    throw Error("triple lift: the three points must be distinct");
  ProjLine line = ProjLine::through(t1, t2);
  if (!line.contains(t3)) throw Error("triple lift: points are not collinear");

  FieldForm fbar = reduce_form_mod2(f);
  std::array<FieldElement, 4> A = line.row0(), B = line.row1();
  std::vector<FieldElement> rest = restrict_to_pencil(fbar, A, B);
  bool all_zero = true;
  for (const FieldElement& c : rest) all_zero = all_zero && c.is_zero();
  if (all_zero) throw Error("triple lift: secant lies on the reduction");
  auto roots = binary_form_rational_roots(rest, FieldSpec::get(t1.spec()->p(), t1.spec()->m()));
  if (roots.size() != 3)
    throw Error("triple lift: secant is not transversal to the reduction");
  for (const auto& [root, mult] : roots)
    if (mult != 1) throw Error("triple lift: secant is not transversal to the reduction");

  LiftedTriple out;
  out.p1 = lift_one_point(f, t1, n);
  out.p2 = lift_one_point(f, t2, n);
  ThirdPoint<PadicScalar> third = collinear_third_padic(f, out.p1, out.p2);
  out.p3 = third.point;
  out.loss = third.loss;
  if (reduce_point_mod2(out.p3) != t3)
    throw Error("triple lift: third intersection does not reduce to the expected point");
  return out;
}

IntForm phi1_transform(const IntForm& f) {
  if (f.degree() != 3) throw Error("phi1: form must be a cubic");
  BigInt zero(0);
  std::array<std::array<BigInt, 4>, 4> M{{{zero, zero, zero, zero},
                                          {zero, zero, zero, zero},
                                          {zero, zero, zero, zero},
                                          {zero, zero, zero, zero}}};
  M[0][0] = 1;
  M[1][1] = 8;
  M[2][2] = 2;
  M[3][3] = 2;
  IntForm sub = f.substitute_linear(M);
  return sub.map_coeffs<BigInt>([](const BigInt& c) {
    if (c % 8 != 0) throw Error("phi1: coefficient not divisible by 8");
    return BigInt(c / 8);
  });
}

ClassTag classify_A(const IntForm& f1, const PadicPoint& p) {
  FieldForm fbar = reduce_mod_p(f1, FieldSpec::get(2, 1));
  ProjPoint rp = reduce_point_mod2(p);
  if (!fbar.eval(rp.coords()).is_zero())
    throw Error("classify: reduction does not lie on the reduced surface");
  unsigned t2 = p.x[2].mod2(), t3 = p.x[3].mod2();
  return (t2 == 0 && t3 == 0) ? ClassTag::X0 : ClassTag::X1;
}

namespace {

/// Chart coefficients of the line through two points; the flag reports
/// whether all four lie in the base ring.
/// Base-rationality at reduced precision: meaningful once a shift has
/// spent part of the precision budget, leaving only `bits` valid bits.
bool base_rational_to(const QuadExtScalar& x, unsigned bits) {
  return x.theta_part().valuation() >= bits;
}

bool secant_chart_base_rational(const PadicPointQ& p, const PadicPointQ& q, unsigned n) {
  // Pick the independent coordinate pair whose 2x2 determinant carries the
  // least valuation; the chart exists whenever every numerator absorbs it.
  int bi = -1, bj = -1;
  unsigned best = n;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      unsigned v = (p.x[i] * q.x[j] - p.x[j] * q.x[i]).valuation();
      if (v < best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  if (bi < 0) return false;
  QuadExtScalar det = p.x[bi] * q.x[bj] - p.x[bj] * q.x[bi];
  QuadExtScalar dinv = det.shifted_down(best).inverse();
  for (int m = 0; m < 4; ++m) {
    if (m == bi || m == bj) continue;
    // x_m = alpha x_bi + beta x_bj on the line
    QuadExtScalar na = p.x[m] * q.x[bj] - q.x[m] * p.x[bj];
    QuadExtScalar nb = p.x[bi] * q.x[m] - q.x[bi] * p.x[m];
    if (na.valuation() < best || nb.valuation() < best) return false;
    if (!base_rational_to(na.shifted_down(best) * dinv, n - best)) return false;
    if (!base_rational_to(nb.shifted_down(best) * dinv, n - best)) return false;
  }
  return true;
}

unsigned projective_distance_valuation(const PadicPointQ& a, const PadicPointQ& b, unsigned n) {
  PadicPointQ bb = b;
  if (a.unit_coord != b.unit_coord) {
    if (!bb.x[a.unit_coord].is_unit()) return 0;
    bb.unit_coord = a.unit_coord;
    bb.normalize();
  }
  unsigned v = n;
  for (int i = 0; i < 4; ++i) v = std::min(v, (a.x[i] - bb.x[i]).valuation());
  return v;
}

}  // namespace

ExperimentResult tangent_limit_experiment(const FormT<QuadExtScalar>& f, const PadicPointQ& p,
                                          int free_coord, unsigned depth) {
  unsigned n = precision_of(f);
  if (depth > n / 2) throw Error("tangent limit: depth exceeds half the working precision");
  if (free_coord < 0 || free_coord > 3 || free_coord == p.unit_coord)
    throw Error("tangent limit: bad free coordinate");
  for (int i = 0; i < 4; ++i)
    if (!p.x[i].is_base_rational())
      throw Error("tangent limit: base point must be base-rational");
  if (!f.eval(p.x).is_zero()) throw Error("tangent limit: point is not on the surface");

  auto gf4 = FieldSpec::get(2, 2);
  Surface reduction(reduce_form_mod2(f), gf4);
  ProjPoint rp = reduce_point_mod2(p);
  if (!reduction.contains(rp)) throw Error("tangent limit: reduction leaves the surface");
  if (reduction.has_line_through(rp))
    throw Error("tangent limit: a rational line passes through the base point");

  int solved = -1;
  for (int i = 0; i < 4; ++i) {
    if (i == p.unit_coord || i == free_coord) continue;
    if (f.partial(i).eval(p.x).is_unit()) {
      solved = i;
      break;
    }
  }
  if (solved < 0)
    throw Error("tangent limit: no unit partial derivative among the solvable coordinates");

  // Limit tangent direction: move the free coordinate, compensate with the
  // solved one so the directional derivative vanishes identically.
  QuadExtScalar zero = QuadExtScalar::from_int(0, n), one = QuadExtScalar::from_int(1, n);
  std::array<QuadExtScalar, 4> w{zero, zero, zero, zero};
  w[free_coord] = one;
  w[solved] = -(f.partial(free_coord).eval(p.x) * f.partial(solved).eval(p.x).inverse());

  // Residual point R of the tangent line: restriction is t^2 (g2 s + g3 t).
  ExperimentResult res;
  {
    std::vector<QuadExtScalar> g = restrict_to_pencil(f, p.x, w);
    if (!g[0].is_zero() || !g[1].is_zero())
      throw Error("tangent limit: tangent restriction is not doubly vanishing at the point");
    unsigned shift = std::min(g[2].valuation(), g[3].valuation());
    if (shift >= n) throw Error("tangent limit: tangent line lies on the surface");
    QuadExtScalar c2 = g[2].shifted_down(shift), c3 = g[3].shifted_down(shift);
    for (int i = 0; i < 4; ++i) res.limit_point.x[i] = c3 * p.x[i] - c2 * w[i];
    res.limit_point.unit_coord = -1;
    for (int i = 0; i < 4; ++i)
      if (res.limit_point.x[i].is_unit()) {
        res.limit_point.unit_coord = i;
        break;
      }
    if (res.limit_point.unit_coord < 0)
      throw Error("tangent limit: residual point has no unit coordinate");
    res.limit_point.normalize();
  }

  res.nondecreasing = true;
  unsigned prev_v = 0;
  for (unsigned i = 1; i <= depth; ++i) {
    std::array<QuadExtScalar, 4> start = p.x;
    start[free_coord] =
        start[free_coord] + QuadExtScalar(PadicScalar(0, n), PadicScalar(uint64_t(1) << i, n));
    PadicPointQ qi = hensel_lift_point(f, start, p.unit_coord, solved);
    PadicPointQ cq = conj_point(qi);

    ThirdPoint<QuadExtScalar> third = collinear_third_padic(f, qi, cq);
    ExperimentRow row;
    row.depth = i;
    row.loss_bits = third.loss;
    row.rational_line = secant_chart_base_rational(qi, cq, n);
    row.third_base_rational = true;
    for (int k = 0; k < 4; ++k)
      row.third_base_rational =
          row.third_base_rational && base_rational_to(third.point.x[k], n - third.loss);
    row.v_min = projective_distance_valuation(res.limit_point, third.point, n);
    if (row.v_min < prev_v) res.nondecreasing = false;
    prev_v = row.v_min;
    res.rows.push_back(row);
  }
  return res;
}

}  // namespace cubicml
