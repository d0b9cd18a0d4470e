#include "cubicml/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace cubicml {

Partition::Partition(size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

Partition Partition::one_class(size_t n) {
  Partition p(n);
  for (size_t i = 1; i < n; ++i) p.merge(0, int(i));
  return p;
}

int Partition::find(int i) const {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

bool Partition::merge(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

size_t Partition::class_count() const {
  size_t n = 0;
  for (size_t i = 0; i < parent_.size(); ++i)
    if (find(int(i)) == int(i)) ++n;
  return n;
}

int Partition::label(int i) const {
  int r = find(i);
  // smallest member of the class: the first index with the same root.
  for (size_t j = 0; j < parent_.size(); ++j)
    if (find(int(j)) == r) return int(j);
  return r;
}

std::vector<int> Partition::labels() const {
  std::vector<int> out;
  std::vector<char> seen(parent_.size(), 0);
  for (size_t i = 0; i < parent_.size(); ++i) {
    int r = find(int(i));
    if (!seen[r]) {
      seen[r] = 1;
      out.push_back(int(i));  // first visit in ascending order = smallest member
    }
  }
  return out;
}

std::vector<std::vector<int>> Partition::classes() const {
  std::map<int, std::vector<int>> by_root;
  for (size_t i = 0; i < parent_.size(); ++i) by_root[find(int(i))].push_back(int(i));
  std::vector<std::vector<int>> out;
  for (auto& [r, members] : by_root) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool Partition::operator==(const Partition& o) const {
  if (size() != o.size()) return false;
  for (size_t i = 0; i < size(); ++i)
    for (size_t j = i + 1; j < size(); ++j)
      if (same(int(i), int(j)) != o.same(int(i), int(j))) return false;
  return true;
}

bool Partition::refines(const Partition& o) const {
  if (size() != o.size()) return false;
  for (size_t i = 0; i < size(); ++i)
    for (size_t j = i + 1; j < size(); ++j)
      if (same(int(i), int(j)) && !o.same(int(i), int(j))) return false;
  return true;
}

Partition intersect_partitions(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw Error("intersect_partitions: ground-set mismatch");
  Partition out(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (a.same(int(i), int(j)) && b.same(int(i), int(j))) out.merge(int(i), int(j));
  return out;
}

std::vector<Triple> collinearity_triples(const Surface& s) {
  const auto& pts = s.points();
  int n = int(pts.size());
  std::vector<Triple> out;

  // A rational line on S collapses all its smooth points into a single
  // class: every triple of its points is collinear, so all of them are
  // admissible triples.
  auto on_common_line = [&](const ProjPoint& p, const ProjPoint& q) {
    for (const ProjLine& l : s.lines())
      if (l.contains(p) && l.contains(q)) return true;
    return false;
  };
  for (const ProjLine& l : s.lines()) {
    std::vector<int> members;
    for (const ProjPoint& p : l.points()) {
      int k = s.point_index(p);
      if (k >= 0) members.push_back(k);
    }
    for (size_t a = 0; a < members.size(); ++a)
      for (size_t b = a; b < members.size(); ++b)
        for (int c : members) out.push_back({members[a], members[b], c});
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (on_common_line(pts[i], pts[j])) continue;
      auto r = s.collinear_third(pts[i], pts[j]);
      if (r.kind != Surface::Collinear::Point) continue;
      int k = s.point_index(*r.point);
      if (k >= 0) out.push_back({i, j, k});
    }
  }

  // Degenerate pairs (P, P): one triple per rational tangent line at P
  // that is not contained in S; the third point is the residual root of
  // the restriction after removing the double root at P.
  for (int i = 0; i < n; ++i) {
    const ProjPoint& p = pts[i];
    Surface::LocalSection sec = s.local_section(p);
    auto spec = s.field();
    std::vector<std::array<FieldElement, 2>> params;
    for (unsigned a = 0; a < spec->q(); ++a)
      params.push_back({FieldElement(spec.get(), a), fe(spec, 1)});
    params.push_back({fe(spec, 1), fe(spec, 0)});
    for (const auto& par : params) {
      std::array<FieldElement, 4> w;
      for (int c = 0; c < 4; ++c) w[c] = par[0] * sec.u[c] + par[1] * sec.v[c];
      ProjLine l = ProjLine::through(p, ProjPoint(w));
      IntersectionCycle cyc = s.intersect_line(l);
      if (cyc.tag == CycleTag::LineInSurface) continue;
      int p_mult = 0;
      std::vector<std::pair<ProjPoint, int>> rest = cyc.rational_points;
      for (auto& [pt, m] : rest)
        if (pt == p) {
          p_mult = m;
          m -= 2;
        }
      if (p_mult < 2) throw Error("collinearity_triples: tangent line lost its double contact");
      for (const auto& [pt, m] : rest)
        if (m > 0) {
          int k = s.point_index(pt);
          if (k >= 0) out.push_back({i, i, k});
        }
    }
  }
  return out;
}

Partition forced_merges(const Surface& s) {
  int n = int(s.points().size());
  Partition part(n);

  for (const ProjLine& l : s.lines()) {
    int prev = -1;
    for (const ProjPoint& p : l.points()) {
      int k = s.point_index(p);
      if (k < 0) continue;
      if (prev >= 0) part.merge(prev, k);
      prev = k;
    }
  }

  // All outcomes of (P, P) form one class.
  std::map<int, int> first_outcome;
  for (const Triple& t : collinearity_triples(s)) {
    if (t.a != t.b) continue;
    auto it = first_outcome.find(t.a);
    if (it == first_outcome.end())
      first_outcome.emplace(t.a, t.c);
    else
      part.merge(it->second, t.c);
  }
  return part;
}

Partition close_admissible(const Surface& s, Partition start) {
  std::vector<Triple> triples = collinearity_triples(s);
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> bucket;  // class pair -> first outcome class
    for (const Triple& t : triples) {
      int ca = start.find(t.a), cb = start.find(t.b);
      if (ca > cb) std::swap(ca, cb);
      int cc = start.find(t.c);
      auto [it, fresh] = bucket.try_emplace({ca, cb}, cc);
      if (!fresh && start.merge(it->second, cc)) changed = true;
    }
  }
  return start;
}

Partition universal_equivalence(const Surface& s) {
  return close_admissible(s, forced_merges(s));
}

Partition property_equivalence(const Surface& s, int i) {
  if (i != 2 && i != 3) throw Error("property_equivalence: property index must be 2 or 3");
  Partition start = forced_merges(s);
  std::map<int, int> outcome;  // point -> a representative of its (P,P) class
  for (const Triple& t : collinearity_triples(s))
    if (t.a == t.b && !outcome.count(t.a)) outcome.emplace(t.a, t.c);
  if (i == 3) {
    for (const auto& [p, c] : outcome) start.merge(p, c);
  } else {
    int first = -1;
    for (const auto& [p, c] : outcome) {
      if (first < 0)
        first = c;
      else
        start.merge(first, c);
    }
  }
  return close_admissible(s, start);
}

namespace {

std::vector<int> class_positions(const Partition& a) {
  // position of each point's class among ascending labels
  std::vector<int> labels = a.labels();
  std::vector<int> pos(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    int lab = -1;
    for (size_t k = 0; k < labels.size(); ++k)
      if (a.same(labels[k], int(i))) { lab = int(k); break; }
    pos[i] = lab;
  }
  return pos;
}

}  // namespace

int class_compose(const Surface& s, const Partition& a, int c1, int c2) {
  if (a.size() != s.points().size()) throw Error("class_compose: partition does not match surface");
  std::vector<int> pos = class_positions(a);
  int lo = std::min(c1, c2), hi = std::max(c1, c2);
  int result = -1;
  for (const Triple& t : collinearity_triples(s)) {
    int pa = pos[t.a], pb = pos[t.b];
    if (std::min(pa, pb) != lo || std::max(pa, pb) != hi) continue;
    int pc = pos[t.c];
    if (result < 0)
      result = pc;
    else if (result != pc)
      throw Error("class_compose: representatives disagree; partition is not admissible");
  }
  if (result < 0) throw Error("class_compose: no defined composition for this class pair");
  return result;
}

CMLTable build_cml(const Surface& s, const Partition& a, int base) {
  CMLTable t;
  t.class_labels = a.labels();
  t.n = int(t.class_labels.size());
  if (base < 0 || base >= t.n) throw Error("build_cml: base class out of range");
  t.base = base;
  t.raw.assign(t.n, std::vector<int>(t.n, -1));
  t.prod.assign(t.n, std::vector<int>(t.n, -1));
  for (int i = 0; i < t.n; ++i)
    for (int j = i; j < t.n; ++j) {
      int r = class_compose(s, a, i, j);
      t.raw[i][j] = t.raw[j][i] = r;
    }
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) t.prod[i][j] = t.raw[base][t.raw[i][j]];
  return t;
}

CMLReport verify_cml_axioms(const CMLTable& t) {
  CMLReport rep;
  int n = t.n, e = t.base;
  const auto& P = t.prod;
  auto fail = [&](const std::string& msg) { rep.failures.push_back(msg); };

  rep.identity = true;
  for (int x = 0; x < n; ++x)
    if (P[e][x] != x || P[x][e] != x) {
      rep.identity = false;
      fail("identity fails at element " + std::to_string(x));
    }

  rep.latin = true;
  for (int x = 0; x < n && rep.latin; ++x) {
    std::vector<char> row(n, 0), col(n, 0);
    for (int y = 0; y < n; ++y) {
      if (row[P[x][y]]++) { rep.latin = false; fail("row " + std::to_string(x) + " repeats"); }
      if (col[P[y][x]]++) { rep.latin = false; fail("column " + std::to_string(x) + " repeats"); }
    }
  }

  rep.commutative = true;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (P[x][y] != P[y][x]) {
        rep.commutative = false;
        fail("commutativity fails at (" + std::to_string(x) + "," + std::to_string(y) + ")");
      }

  rep.moufang = true;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (P[P[x][y]][P[x][z]] != P[P[x][x]][P[y][z]]) {
          rep.moufang = false;
          fail("Moufang identity fails at (" + std::to_string(x) + "," + std::to_string(y) + "," +
               std::to_string(z) + ")");
        }

  rep.orders.assign(n, 0);
  rep.orders_divide_6 = true;
  for (int x = 0; x < n; ++x) {
    int acc = x, k = 1;
    while (acc != e && k <= 2 * n) {
      acc = P[acc][x];
      ++k;
    }
    rep.orders[x] = (acc == e) ? k : 0;
    if (rep.orders[x] == 0 || 6 % rep.orders[x] != 0) {
      rep.orders_divide_6 = false;
      fail("element " + std::to_string(x) + " has order " + std::to_string(rep.orders[x]));
    }
  }

  // Direct-product split: the exponent-2 part times the exponent-3 part
  // must tile the loop bijectively and multiply componentwise.
  std::vector<int> e2, e3;
  for (int x = 0; x < n; ++x) {
    if (P[x][x] == e) e2.push_back(x);
    if (rep.orders[x] == 1 || rep.orders[x] == 3) e3.push_back(x);
  }
  rep.splits_exp2_exp3 = (int(e2.size() * e3.size()) == n);
  if (rep.splits_exp2_exp3) {
    std::vector<char> hit(n, 0);
    for (int a : e2)
      for (int b : e3) {
        if (hit[P[a][b]]++) rep.splits_exp2_exp3 = false;
      }
    for (int a : e2)
      for (int b : e3)
        for (int a2 : e2)
          for (int b2 : e3)
            if (P[P[a][b]][P[a2][b2]] != P[P[a][a2]][P[b][b2]]) rep.splits_exp2_exp3 = false;
  }
  if (!rep.splits_exp2_exp3) fail("no exponent-2 x exponent-3 direct-product split");

  rep.associative = true;
  for (int x = 0; x < n && rep.associative; ++x)
    for (int y = 0; y < n && rep.associative; ++y)
      for (int z = 0; z < n; ++z)
        if (P[P[x][y]][z] != P[x][P[y][z]]) {
          rep.associative = false;
          break;
        }
  return rep;
}

namespace {

bool tables_isomorphic(const CMLTable& t1, const CMLTable& t2) {
  int n = t1.n;
  if (n != t2.n) return false;
  std::vector<int> phi(n, -1), used(n, 0);
  phi[t1.base] = t2.base;
  used[t2.base] = 1;

  // Backtracking over bijections with incremental product checks.
  std::function<bool(int)> go = [&](int i) -> bool {
    if (i == n) return true;
    if (phi[i] != -1) return go(i + 1);
    for (int img = 0; img < n; ++img) {
      if (used[img]) continue;
      phi[i] = img;
      used[img] = 1;
      bool ok = true;
      for (int j = 0; j <= i && ok; ++j) {
        if (phi[j] == -1) continue;
        int p1 = t1.prod[i][j], p2 = t1.prod[j][i];
        if (phi[p1] != -1 && t2.prod[phi[i]][phi[j]] != phi[p1]) ok = false;
        if (ok && phi[p2] != -1 && t2.prod[phi[j]][phi[i]] != phi[p2]) ok = false;
      }
      if (ok && go(i + 1)) return true;
      used[img] = 0;
      phi[i] = -1;
    }
    return false;
  };
  if (!go(0)) return false;
  // full verification of the found bijection
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (phi[t1.prod[i][j]] != t2.prod[phi[i]][phi[j]]) return false;
  return true;
}

}  // namespace

bool base_independence_check(const Surface& s, const Partition& a) {
  size_t n = a.labels().size();
  if (n > 9) throw Error("base_independence_check: class count exceeds 9");
  std::vector<CMLTable> tables;
  for (size_t b = 0; b < n; ++b) tables.push_back(build_cml(s, a, int(b)));
  for (size_t b = 1; b < n; ++b)
    if (!tables_isomorphic(tables[0], tables[b])) return false;
  return true;
}

}  // namespace cubicml
