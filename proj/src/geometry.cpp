#include "cubicml/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace cubicml {

namespace {

// Lexicographic comparison on the coefficient vector of a field element,
// with c0 most significant.  This is the canonical element order used for
// point normalization output and sorting.
bool coeff_less(const FieldElement& a, const FieldElement& b) {
  const FieldSpec* s = a.spec();
  auto ca = s->coeffs(a.index()), cb = s->coeffs(b.index());
  return ca < cb;
}

std::string coord_str(const FieldElement& x) {
  if (x.spec()->m() == 1) return std::to_string(x.index());
  return x.spec()->to_string(x.index());
}

}  // namespace

ProjPoint::ProjPoint(std::array<FieldElement, 4> x) : x_(std::move(x)) {
  int lead = -1;
  for (int i = 0; i < 4; ++i) {
    if (!x_[i].is_zero()) { lead = i; break; }
  }
  if (lead < 0) throw Error("ProjPoint: all coordinates are zero");
  if (x_[lead].index() != 1) {
    FieldElement inv = x_[lead].inverse();
    for (int i = 0; i < 4; ++i) x_[i] = x_[i] * inv;
  }
}

bool ProjPoint::operator<(const ProjPoint& o) const {
  for (int i = 0; i < 4; ++i) {
    if (x_[i].index() != o.x_[i].index()) return coeff_less(x_[i], o.x_[i]);
  }
  return false;
}

std::string ProjPoint::to_string() const {
  std::string s = "(";
  for (int i = 0; i < 4; ++i) {
    if (i) s += ":";
    s += coord_str(x_[i]);
  }
  s += ")";
  return s;
}

ProjPoint make_point(const std::shared_ptr<const FieldSpec>& spec, std::array<unsigned, 4> idx) {
  return ProjPoint({fe(spec, idx[0]), fe(spec, idx[1]), fe(spec, idx[2]), fe(spec, idx[3])});
}

std::optional<ProjLine> ProjLine::from_rows(std::array<FieldElement, 4> r0,
                                            std::array<FieldElement, 4> r1) {
  // Gaussian elimination to RREF on the 2x4 matrix.
  std::array<std::array<FieldElement, 4>, 2> m{r0, r1};
  int row = 0;
  std::array<int, 2> piv{-1, -1};
  for (int col = 0; col < 4 && row < 2; ++col) {
    int sel = -1;
    for (int r = row; r < 2; ++r) {
      if (!m[r][col].is_zero()) { sel = r; break; }
    }
    if (sel < 0) continue;
    std::swap(m[row], m[sel]);
    FieldElement inv = m[row][col].inverse();
    for (int c = 0; c < 4; ++c) m[row][c] = m[row][c] * inv;
    for (int r = 0; r < 2; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      FieldElement f = m[r][col];
      for (int c = 0; c < 4; ++c) m[r][c] = m[r][c] - f * m[row][c];
    }
    piv[row] = col;
    ++row;
  }
  if (row < 2) return std::nullopt;
  ProjLine l;
  l.r0_ = m[0];
  l.r1_ = m[1];
  l.piv_ = piv;
  return l;
}

ProjLine ProjLine::through(const ProjPoint& p, const ProjPoint& q) {
  auto l = from_rows(p.coords(), q.coords());
  if (!l) throw Error("ProjLine::through: points coincide");
  return *l;
}

bool ProjLine::contains(const ProjPoint& p) const {
  // Span test: p is on the line iff reducing p by the two RREF rows
  // leaves the zero vector.
  std::array<FieldElement, 4> v = p.coords();
  for (int r = 0; r < 2; ++r) {
    FieldElement f = v[piv_[r]];
    if (f.is_zero()) continue;
    const auto& row = r == 0 ? r0_ : r1_;
    for (int c = 0; c < 4; ++c) v[c] = v[c] - f * row[c];
  }
  for (int c = 0; c < 4; ++c)
    if (!v[c].is_zero()) return false;
  return true;
}

ProjPoint ProjLine::at(const FieldElement& s, const FieldElement& t) const {
  std::array<FieldElement, 4> v{s * r0_[0] + t * r1_[0], s * r0_[1] + t * r1_[1],
                                s * r0_[2] + t * r1_[2], s * r0_[3] + t * r1_[3]};
  return ProjPoint(v);
}

std::vector<ProjPoint> ProjLine::points() const {
  const FieldSpec* sp = r0_[0].spec();
  std::vector<ProjPoint> out;
  out.reserve(sp->q() + 1);
  FieldElement one(sp, 1), zero(sp, 0);
  for (unsigned t = 0; t < sp->q(); ++t) out.push_back(at(one, FieldElement(sp, t)));
  out.push_back(at(zero, one));
  return out;
}

std::array<FieldElement, 2> ProjLine::param_of(const ProjPoint& p) const {
  // The pivot coordinates of the RREF rows form an identity block, so the
  // parameters can be read off directly.
  return {p[piv_[0]], p[piv_[1]]};
}

bool ProjLine::operator<(const ProjLine& o) const {
  for (int r = 0; r < 2; ++r) {
    const auto &a = r == 0 ? r0_ : r1_, &b = r == 0 ? o.r0_ : o.r1_;
    for (int i = 0; i < 4; ++i)
      if (a[i].index() != b[i].index()) return coeff_less(a[i], b[i]);
  }
  return false;
}

std::vector<ProjPoint> enumerate_proj_points(const std::shared_ptr<const FieldSpec>& spec) {
  std::vector<ProjPoint> out;
  unsigned q = spec->q();
  // Leading coordinate 1 at position i, free coordinates after it: the
  // enumeration hits each point exactly once.
  for (int lead = 0; lead < 4; ++lead) {
    unsigned free = 3 - lead;
    std::vector<unsigned> idx(free, 0);
    uint64_t total = 1;
    for (unsigned k = 0; k < free; ++k) total *= q;
    std::array<unsigned, 4> c{0, 0, 0, 0};
    c[lead] = 1;
    for (uint64_t n = 0; n < total; ++n) {
      uint64_t rem = n;
      for (unsigned k = 0; k < free; ++k) {
        c[lead + 1 + k] = static_cast<unsigned>(rem % q);
        rem /= q;
      }
      out.push_back(make_point(spec, c));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<ProjLine>& lines_in_p3(const std::shared_ptr<const FieldSpec>& spec) {
  static std::map<const FieldSpec*, std::vector<ProjLine>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(spec.get());
  if (it != cache.end()) return it->second;
  if (spec->q() > 256) throw Error("lines_in_p3: field too large");

  // Enumerate RREF matrices directly: choose pivot columns p0 < p1 and run
  // over the free entries (zero in pivot columns, zero left of each pivot).
  std::vector<ProjLine> lines;
  unsigned q = spec->q();
  for (int p0 = 0; p0 < 4; ++p0) {
    for (int p1 = p0 + 1; p1 < 4; ++p1) {
      std::vector<int> free0, free1;
      for (int c = 0; c < 4; ++c) {
        if (c == p0 || c == p1) continue;
        if (c > p0) free0.push_back(c);
        if (c > p1) free1.push_back(c);
      }
      size_t nf = free0.size() + free1.size();
      uint64_t total = 1;
      for (size_t k = 0; k < nf; ++k) total *= q;
      for (uint64_t n = 0; n < total; ++n) {
        std::array<FieldElement, 4> r0{fe(spec, 0), fe(spec, 0), fe(spec, 0), fe(spec, 0)};
        std::array<FieldElement, 4> r1 = r0;
        r0[p0] = fe(spec, 1);
        r1[p1] = fe(spec, 1);
        uint64_t rem = n;
        for (int c : free0) {
          r0[c] = fe(spec, static_cast<unsigned>(rem % q));
          rem /= q;
        }
        for (int c : free1) {
          r1[c] = fe(spec, static_cast<unsigned>(rem % q));
          rem /= q;
        }
        auto l = ProjLine::from_rows(r0, r1);
        if (l && l->pivots() == std::array<int, 2>{p0, p1}) lines.push_back(*l);
      }
    }
  }
  std::sort(lines.begin(), lines.end());
  uint64_t q2 = uint64_t(q) * q;
  uint64_t expected = (q2 + 1) * (q2 + q + 1);
  if (lines.size() != expected) throw Error("lines_in_p3: internal count mismatch");
  return cache.emplace(spec.get(), std::move(lines)).first->second;
}

std::vector<std::pair<std::array<FieldElement, 2>, int>> binary_form_rational_roots(
    const std::vector<FieldElement>& coeffs, const std::shared_ptr<const FieldSpec>& spec) {
  std::vector<std::pair<std::array<FieldElement, 2>, int>> out;
  bool all_zero = true;
  for (const auto& c : coeffs)
    if (!c.is_zero()) all_zero = false;
  if (all_zero) throw Error("binary_form_rational_roots: zero form");

  auto eval = [&](const std::vector<FieldElement>& f, const FieldElement& a,
                  const FieldElement& b) {
    // f(a,b) = sum f[k] a^(d-k) b^k by Horner in b/a-free form.
    size_t d = f.size() - 1;
    FieldElement acc = fe(spec, 0);
    FieldElement ap = fe(spec, 1);
    std::vector<FieldElement> apow(d + 1, ap), bpow(d + 1, ap);
    for (size_t k = 1; k <= d; ++k) {
      apow[k] = apow[k - 1] * a;
      bpow[k] = bpow[k - 1] * b;
    }
    for (size_t k = 0; k <= d; ++k) acc = acc + f[k] * apow[d - k] * bpow[k];
    return acc;
  };

  // Deflate a linear factor for root (a:1) or (1:0).
  auto deflate = [&](std::vector<FieldElement> f, const FieldElement& a,
                     bool at_infinity) -> std::vector<FieldElement> {
    size_t d = f.size() - 1;
    std::vector<FieldElement> g(d, fe(spec, 0));
    if (at_infinity) {
      // Root (1:0): the leading s-coefficient vanishes and a factor t splits off.
      for (size_t k = 1; k <= d; ++k) g[k - 1] = f[k];
    } else {
      // Root (a:1): divide by (s - a t) via the forward recurrence.
      g[0] = f[0];
      for (size_t k = 1; k < d; ++k) g[k] = f[k] + a * g[k - 1];
    }
    return g;
  };

  std::vector<std::array<FieldElement, 2>> params;
  for (unsigned a = 0; a < spec->q(); ++a) params.push_back({FieldElement(spec.get(), a), fe(spec, 1)});
  params.push_back({fe(spec, 1), fe(spec, 0)});

  for (const auto& par : params) {
    std::vector<FieldElement> f = coeffs;
    int mult = 0;
    while (f.size() >= 2 && eval(f, par[0], par[1]).is_zero()) {
      f = deflate(f, par[0], par[1].is_zero());
      ++mult;
    }
    if (mult > 0) out.push_back({par, mult});
  }
  return out;
}

Surface::Surface(FieldForm f, std::shared_ptr<const FieldSpec> spec)
    : spec_(std::move(spec)), f_(std::move(f)) {
  if (f_.degree() != 3) throw Error("Surface: form must be a cubic");
  for (int i = 0; i < 4; ++i) grad_[i] = f_.partial(i);

  for (const ProjPoint& p : enumerate_proj_points(spec_)) {
    if (!f_.eval(p.coords()).is_zero()) continue;
    all_points_.push_back(p);
    bool singular = true;
    for (int i = 0; i < 4 && singular; ++i)
      if (!grad_[i].eval(p.coords()).is_zero()) singular = false;
    (singular ? singular_points_ : smooth_points_).push_back(p);
  }

  // Rational lines on the surface: every such line carries q+1 >= 3
  // rational surface points, so scanning point pairs finds them all.
  std::set<ProjPoint> on_surface(all_points_.begin(), all_points_.end());
  std::set<ProjLine> found;
  for (size_t i = 0; i < all_points_.size(); ++i) {
    for (size_t j = i + 1; j < all_points_.size(); ++j) {
      ProjLine l = ProjLine::through(all_points_[i], all_points_[j]);
      if (found.count(l)) continue;
      bool inside = true;
      for (const ProjPoint& p : l.points()) {
        if (!on_surface.count(p)) { inside = false; break; }
      }
      if (!inside) continue;
      auto r = restrict_to_pencil(f_, l.row0(), l.row1());
      bool zero = true;
      for (const auto& c : r)
        if (!c.is_zero()) zero = false;
      if (zero) found.insert(l);
    }
  }
  lines_.assign(found.begin(), found.end());
}

bool Surface::contains(const ProjPoint& p) const { return f_.eval(p.coords()).is_zero(); }

int Surface::point_index(const ProjPoint& p) const {
  auto it = std::lower_bound(smooth_points_.begin(), smooth_points_.end(), p);
  if (it == smooth_points_.end() || !(*it == p)) return -1;
  return static_cast<int>(it - smooth_points_.begin());
}

std::array<FieldElement, 4> Surface::gradient(const ProjPoint& p) const {
  return {grad_[0].eval(p.coords()), grad_[1].eval(p.coords()), grad_[2].eval(p.coords()),
          grad_[3].eval(p.coords())};
}

bool Surface::has_line_through(const ProjPoint& p) const {
  for (const ProjLine& l : lines_)
    if (l.contains(p)) return true;
  return false;
}

std::array<FieldElement, 4> Surface::tangent_plane(const ProjPoint& p) const {
  if (!contains(p)) throw Error("tangent_plane: point not on surface");
  auto g = gradient(p);
  int lead = -1;
  for (int i = 0; i < 4; ++i)
    if (!g[i].is_zero()) { lead = i; break; }
  if (lead < 0) throw Error("tangent_plane: point is singular");
  FieldElement inv = g[lead].inverse();
  for (int i = 0; i < 4; ++i) g[i] = g[i] * inv;
  return g;
}

IntersectionCycle Surface::intersect_line(const ProjLine& line) const {
  IntersectionCycle cyc;
  cyc.restriction = restrict_to_pencil(f_, line.row0(), line.row1());
  bool zero = true;
  for (const auto& c : cyc.restriction)
    if (!c.is_zero()) zero = false;
  if (zero) {
    cyc.tag = CycleTag::LineInSurface;
    for (const ProjPoint& p : line.points()) cyc.rational_points.push_back({p, 1});
    return cyc;
  }
  auto roots = binary_form_rational_roots(cyc.restriction, spec_);
  int total = 0, maxmult = 0;
  for (const auto& [par, mult] : roots) {
    cyc.rational_points.push_back({line.at(par[0], par[1]), mult});
    total += mult;
    maxmult = std::max(maxmult, mult);
  }
  if (maxmult >= 3)
    cyc.tag = CycleTag::Triple;
  else if (maxmult == 2)
    cyc.tag = CycleTag::Tangent;
  else if (total == 3)
    cyc.tag = CycleTag::Transversal3Rational;
  else
    cyc.tag = CycleTag::PartialRational;
  return cyc;
}

Surface::Collinear Surface::collinear_third(const ProjPoint& p, const ProjPoint& q) const {
  if (!contains(p) || !contains(q)) throw Error("collinear_third: point not on surface");
  if (p == q) return {Collinear::TangentSection, std::nullopt};
  ProjLine line = ProjLine::through(p, q);
  IntersectionCycle cyc = intersect_line(line);
  if (cyc.tag == CycleTag::LineInSurface) return {Collinear::LineInSurface, std::nullopt};

  // Remove one copy of each input point from the divisor; what stays is
  // the third intersection point.  A repeated root of a binary cubic over
  // a finite field is automatically rational, so the leftover root always
  // is as well.
  std::vector<std::pair<ProjPoint, int>> rest = cyc.rational_points;
  for (const ProjPoint& x : {p, q}) {
    bool hit = false;
    for (auto& [pt, mult] : rest) {
      if (pt == x && mult > 0) { --mult; hit = true; break; }
    }
    if (!hit) throw Error("collinear_third: internal divisor mismatch");
  }
  for (const auto& [pt, mult] : rest)
    if (mult > 0) return {Collinear::Point, pt};
  throw Error("collinear_third: third intersection point is not rational");
}

Surface::LocalSection Surface::local_section(const ProjPoint& p) const {
  auto g = tangent_plane(p);
  int k = -1;
  for (int i = 0; i < 4; ++i)
    if (!g[i].is_zero()) { k = i; break; }

  // Kernel basis of the plane: e_j - g[j] e_k for j != k.
  std::vector<std::array<FieldElement, 4>> ker;
  for (int j = 0; j < 4; ++j) {
    if (j == k) continue;
    std::array<FieldElement, 4> v{fe(spec_, 0), fe(spec_, 0), fe(spec_, 0), fe(spec_, 0)};
    v[j] = fe(spec_, 1);
    v[k] = v[k] - g[j];
    ker.push_back(v);
  }

  // Pick the first pair (u, v) from the kernel basis that completes P to a
  // basis of the plane.
  auto rank3 = [&](const std::array<FieldElement, 4>& a, const std::array<FieldElement, 4>& b) {
    std::array<std::array<FieldElement, 4>, 3> m{p.coords(), a, b};
    int row = 0;
    for (int col = 0; col < 4 && row < 3; ++col) {
      int sel = -1;
      for (int r = row; r < 3; ++r)
        if (!m[r][col].is_zero()) { sel = r; break; }
      if (sel < 0) continue;
      std::swap(m[row], m[sel]);
      FieldElement inv = m[row][col].inverse();
      for (int c = 0; c < 4; ++c) m[row][c] = m[row][c] * inv;
      for (int r = row + 1; r < 3; ++r) {
        FieldElement f = m[r][col];
        if (f.is_zero()) continue;
        for (int c = 0; c < 4; ++c) m[r][c] = m[r][c] - f * m[row][c];
      }
      ++row;
    }
    return row == 3;
  };

  LocalSection sec{};
  bool picked = false;
  for (size_t i = 0; i < ker.size() && !picked; ++i) {
    for (size_t j = i + 1; j < ker.size() && !picked; ++j) {
      if (rank3(ker[i], ker[j])) {
        sec.u = ker[i];
        sec.v = ker[j];
        picked = true;
      }
    }
  }
  if (!picked) throw Error("local_section: degenerate plane frame");

  // Expand F(P + t2 u + t3 v) per term; collect the degree-2 and degree-3
  // homogeneous parts in (t2, t3).
  std::map<std::pair<int, int>, FieldElement> coef;
  auto add = [&](int a, int b, const FieldElement& c) {
    auto it = coef.find({a, b});
    if (it == coef.end())
      coef.emplace(std::pair<int, int>{a, b}, c);
    else
      it->second = it->second + c;
  };
  for (const auto& [e, c] : f_.terms()) {
    // trivariate polynomial in (1, t2, t3) keyed by (deg t2, deg t3)
    std::map<std::pair<int, int>, FieldElement> poly{{{0, 0}, c}};
    for (int i = 0; i < 4; ++i) {
      for (unsigned rep = 0; rep < e[i]; ++rep) {
        std::map<std::pair<int, int>, FieldElement> next;
        for (const auto& [ab, pc] : poly) {
          auto put = [&](int a, int b, const FieldElement& v) {
            if (v.is_zero()) return;
            auto it = next.find({a, b});
            if (it == next.end())
              next.emplace(std::pair<int, int>{a, b}, v);
            else
              it->second = it->second + v;
          };
          put(ab.first, ab.second, pc * p[i]);
          put(ab.first + 1, ab.second, pc * sec.u[i]);
          put(ab.first, ab.second + 1, pc * sec.v[i]);
        }
        poly = std::move(next);
      }
    }
    for (const auto& [ab, pc] : poly) add(ab.first, ab.second, pc);
  }
  auto get = [&](int a, int b) {
    auto it = coef.find({a, b});
    return it == coef.end() ? fe(spec_, 0) : it->second;
  };
  if (!get(0, 0).is_zero() || !get(1, 0).is_zero() || !get(0, 1).is_zero())
    throw Error("local_section: expansion has unexpected low-order terms");
  sec.q2 = {get(2, 0), get(1, 1), get(0, 2)};
  sec.c3 = {get(3, 0), get(2, 1), get(1, 2), get(0, 3)};
  return sec;
}

bool Surface::is_eckardt(const ProjPoint& p) const {
  if (has_line_through(p)) throw Error("is_eckardt: a rational line on the surface passes through the point");
  LocalSection sec = local_section(p);
  bool q2_zero = sec.q2[0].is_zero() && sec.q2[1].is_zero() && sec.q2[2].is_zero();
  if (q2_zero) {
    bool c3_zero = true;
    for (const auto& c : sec.c3)
      if (!c.is_zero()) c3_zero = false;
    if (c3_zero) throw Error("is_eckardt: tangent plane section vanishes to order > 3");
  }
  return q2_zero;
}

bool Surface::eckardt_cone_squarefree(const ProjPoint& p) const {
  LocalSection sec = local_section(p);
  std::vector<FieldElement> c3(sec.c3.begin(), sec.c3.end());
  // Squarefree over the closure iff no rational repeated root: a repeated
  // root of a binary cubic over a finite field is rational.
  for (const auto& [par, mult] : binary_form_rational_roots(c3, spec_))
    if (mult >= 2) return false;
  return true;
}

Surface::TangentSection Surface::tangent_section_points(const ProjPoint& p) const {
  if (has_line_through(p))
    throw Error("tangent_section_points: a rational line on the surface passes through the point");
  auto plane = tangent_plane(p);
  TangentSection ts;
  for (const ProjPoint& x : all_points_) {
    FieldElement dot = plane[0] * x[0] + plane[1] * x[1] + plane[2] * x[2] + plane[3] * x[3];
    if (dot.is_zero()) ts.points.push_back(x);
  }
  // Rational tangent line at P in the section: a rational root of Q2
  // (or of C3 at an Eckardt point) gives a rational line through P with
  // contact order >= 3.
  LocalSection sec = local_section(p);
  std::vector<FieldElement> probe;
  if (!sec.q2[0].is_zero() || !sec.q2[1].is_zero() || !sec.q2[2].is_zero())
    probe.assign(sec.q2.begin(), sec.q2.end());
  else
    probe.assign(sec.c3.begin(), sec.c3.end());
  ts.rational_tangent_line_at_p = !binary_form_rational_roots(probe, spec_).empty();
  return ts;
}

bool Surface::is_general_position(const ProjPoint& p, const ProjPoint& q) const {
  if (p == q) return false;
  if (!contains(p) || !contains(q)) throw Error("is_general_position: point not on surface");
  IntersectionCycle cyc = intersect_line(ProjLine::through(p, q));
  // General position: the line is not on the surface and the intersection
  // divisor is squarefree.  A repeated root is automatically rational, so
  // the two squarefree tags are exactly these.
  return cyc.tag == CycleTag::Transversal3Rational || cyc.tag == CycleTag::PartialRational;
}

unsigned Surface::bad_locus_count(const ProjPoint& p) const {
  auto plane = tangent_plane(p);
  FieldForm polar = polar_quadric(f_, p.coords());
  unsigned count = 0;
  for (const ProjPoint& x : all_points_) {
    FieldElement dot = plane[0] * x[0] + plane[1] * x[1] + plane[2] * x[2] + plane[3] * x[3];
    if (dot.is_zero() || polar.eval(x.coords()).is_zero()) ++count;
  }
  return count;
}

Surface::SingularScan Surface::singular_points_up_to(unsigned degree_bound) const {
  SingularScan scan;
  scan.requested_bound = degree_bound;
  // Cap each extension scan so P^3 enumeration stays fast: extension field
  // size at most 64 (degree-1 scan always runs).
  unsigned eff = 1;
  for (unsigned e = 1; e <= degree_bound; ++e) {
    double sz = std::pow(double(spec_->q()), double(e));
    if (e > 1 && sz > 64.0) break;
    eff = e;
  }
  scan.effective_bound = eff;
  for (unsigned e = 1; e <= eff; ++e) {
    auto ext = FieldSpec::get(spec_->p(), spec_->m() * e);
    FieldForm fe_ = f_.template map_coeffs<FieldElement>(
        [&](const FieldElement& c) { return embed_tower(c, ext.get()); });
    std::array<FieldForm, 4> ge;
    for (int i = 0; i < 4; ++i) ge[i] = fe_.partial(i);
    for (const ProjPoint& x : enumerate_proj_points(ext)) {
      if (!fe_.eval(x.coords()).is_zero()) continue;
      bool singular = true;
      for (int i = 0; i < 4 && singular; ++i)
        if (!ge[i].eval(x.coords()).is_zero()) singular = false;
      if (!singular) continue;
      // Report a point only at the degree of its field of definition: a
      // point rational over a proper subextension is fixed by the
      // corresponding Frobenius power.
      bool minimal = true;
      for (unsigned d = 1; d < e; ++d) {
        if (e % d != 0) continue;
        bool fixed = true;
        for (int i = 0; i < 4; ++i) {
          FieldElement fr = x[i];
          for (unsigned rep = 0; rep < spec_->m() * d; ++rep) fr = fr.frobenius();
          if (fr != x[i]) { fixed = false; break; }
        }
        if (fixed) { minimal = false; break; }
      }
      if (minimal) scan.found.push_back({e, x.to_string()});
    }
  }
  return scan;
}

bool Surface::tangency_locus_check(const ProjPoint& p0, const ProjPoint& p) const {
  if (!contains(p)) throw Error("tangency_locus_check: point not on surface");
  auto plane = tangent_plane(p);
  FieldElement dot = plane[0] * p0[0] + plane[1] * p0[1] + plane[2] * p0[2] + plane[3] * p0[3];
  if (!dot.is_zero()) throw Error("tangency_locus_check: base point not on tangent plane");

  // Adapted frame: column 0 is P, column 1 is P0 (or a substitute if they
  // coincide), column 2 completes a basis of the tangent plane, column 3
  // leaves the plane.  In these coordinates the plane is {T = 0} and the
  // smoothness of the incidence curve at P reads off the mixed second
  // partials f_XY, f_YY, f_YZ at (1:0:0:0).
  LocalSection sec = local_section(p);
  std::array<std::array<FieldElement, 4>, 4> cols;
  cols[0] = p.coords();
  bool p0_is_p = (p0 == p);
  cols[1] = p0_is_p ? sec.u : p0.coords();

  // Column 2: first of {u, v} keeping rank 3 with cols 0 and 1.
  auto rank_of = [&](std::vector<std::array<FieldElement, 4>> rows) {
    int row = 0;
    int n = static_cast<int>(rows.size());
    for (int col = 0; col < 4 && row < n; ++col) {
      int sel = -1;
      for (int r = row; r < n; ++r)
        if (!rows[r][col].is_zero()) { sel = r; break; }
      if (sel < 0) continue;
      std::swap(rows[row], rows[sel]);
      FieldElement inv = rows[row][col].inverse();
      for (int c = 0; c < 4; ++c) rows[row][c] = rows[row][c] * inv;
      for (int r = row + 1; r < n; ++r) {
        FieldElement f = rows[r][col];
        if (f.is_zero()) continue;
        for (int c = 0; c < 4; ++c) rows[r][c] = rows[r][c] - f * rows[row][c];
      }
      ++row;
    }
    return row;
  };
  bool found2 = false;
  for (const auto& cand : {sec.u, sec.v}) {
    if (rank_of({cols[0], cols[1], cand}) == 3) {
      cols[2] = cand;
      found2 = true;
      break;
    }
  }
  if (!found2) throw Error("tangency_locus_check: cannot complete plane frame");

  // Column 3: first standard basis vector off the plane.
  bool found3 = false;
  for (int j = 0; j < 4; ++j) {
    std::array<FieldElement, 4> ej{fe(spec_, 0), fe(spec_, 0), fe(spec_, 0), fe(spec_, 0)};
    ej[j] = fe(spec_, 1);
    if (!plane[j].is_zero()) {
      cols[3] = ej;
      found3 = true;
      break;
    }
  }
  if (!found3) throw Error("tangency_locus_check: cannot leave the plane");

  std::array<std::array<FieldElement, 4>, 4> M;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M[i][j] = cols[j][i];
  FieldForm g = f_.substitute_linear(M);

  std::array<FieldElement, 4> e0{fe(spec_, 1), fe(spec_, 0), fe(spec_, 0), fe(spec_, 0)};
  FieldElement gxy = g.partial(0).partial(1).eval(e0);
  FieldElement gyy = g.partial(1).partial(1).eval(e0);
  FieldElement gyz = g.partial(1).partial(2).eval(e0);
  return !(gxy.is_zero() && gyy.is_zero() && gyz.is_zero());
}

}  // namespace cubicml
