#include "cubicml/census.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "cubicml/geometry.hpp"

namespace cubicml {

namespace {

constexpr uint32_t kFormCount = uint32_t(1) << 20;
constexpr unsigned kMaxBound = 6;  // largest covering field stays enumerable

std::array<Expo, 20> make_monomials() {
  std::array<Expo, 20> out{};
  int t = 0;
  for (unsigned e0 = 0; e0 <= 3; ++e0)
    for (unsigned e1 = 0; e0 + e1 <= 3; ++e1)
      for (unsigned e2 = 0; e0 + e1 + e2 <= 3; ++e2)
        out[t++] = Expo{uint8_t(e0), uint8_t(e1), uint8_t(e2), uint8_t(3 - e0 - e1 - e2)};
  return out;
}

/// Extension degrees whose union of subfields covers every closed-point
/// degree up to the bound: keep e unless a multiple of e also fits.
std::vector<unsigned> covering_degrees(unsigned bound) {
  std::vector<unsigned> out;
  for (unsigned e = bound; e >= 1; --e)
    if (2 * e > bound) out.push_back(e);
  return out;
}

/// Gradient values of a monomial at a point (characteristic 2: the
/// partial of x_j^e is e mod 2 copies of x_j^(e-1) times the rest).
std::array<FieldElement, 4> monomial_gradient(const Expo& e, const ProjPoint& p) {
  const FieldSpec* sp = p.spec();
  FieldElement zero(sp, 0);
  std::array<FieldElement, 4> out{zero, zero, zero, zero};
  for (int j = 0; j < 4; ++j) {
    if (e[j] % 2 == 0) continue;  // even exponent kills the term mod 2
    FieldElement v(sp, 1);
    for (int i = 0; i < 4; ++i) {
      unsigned pw = e[i] - (i == j ? 1 : 0);
      for (unsigned k = 0; k < pw; ++k) v = v * p[i];
    }
    out[j] = v;
  }
  return out;
}

/// Mark every coefficient mask whose surface has a singular point at p:
/// the four gradient components vanishing are GF(2)-linear conditions on
/// the 20 bits, so the singular forms at p are a linear subspace.
void mark_singular_at(const ProjPoint& p, const std::array<Expo, 20>& mono,
                      std::vector<uint8_t>& singular) {
  const FieldSpec* sp = p.spec();
  unsigned m = sp->m();
  std::vector<uint32_t> rows(4 * m, 0);  // one row per (component, basis coefficient)
  for (int t = 0; t < 20; ++t) {
    std::array<FieldElement, 4> g = monomial_gradient(mono[t], p);
    for (int j = 0; j < 4; ++j) {
      auto c = sp->coeffs(g[j].index());
      for (unsigned r = 0; r < m; ++r)
        if (c[r]) rows[j * m + r] |= uint32_t(1) << t;
    }
  }

  // Row echelon over GF(2); record pivot columns.
  int pivot_col[20];
  int rank = 0;
  for (int col = 0; col < 20 && rank < int(rows.size()); ++col) {
    int sel = -1;
    for (size_t r = rank; r < rows.size(); ++r)
      if (rows[r] >> col & 1) {
        sel = int(r);
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[rank], rows[sel]);
    for (size_t r = 0; r < rows.size(); ++r)
      if (int(r) != rank && (rows[r] >> col & 1)) rows[r] ^= rows[rank];
    pivot_col[rank++] = col;
  }

  // Nullspace basis: one vector per free column.
  std::vector<uint32_t> basis;
  uint32_t piv_mask = 0;
  for (int r = 0; r < rank; ++r) piv_mask |= uint32_t(1) << pivot_col[r];
  for (int col = 0; col < 20; ++col) {
    if (piv_mask >> col & 1) continue;
    uint32_t v = uint32_t(1) << col;
    for (int r = 0; r < rank; ++r)
      if (rows[r] >> col & 1) v |= uint32_t(1) << pivot_col[r];
    basis.push_back(v);
  }

  // Enumerate the subspace by Gray code.
  uint32_t cur = 0;
  uint64_t total = uint64_t(1) << basis.size();
  for (uint64_t k = 1; k < total; ++k) {
    cur ^= basis[std::countr_zero(k)];
    singular[cur] = 1;
  }
}

CensusRecord analyze_smooth_form(uint32_t mask) {
  CensusRecord rec;
  rec.mask = mask;
  rec.smooth = true;
  Surface s(form_of_mask(mask), FieldSpec::get(2, 1));
  rec.n = unsigned(s.points().size());
  rec.line_count = unsigned(s.lines().size());
  rec.all_eckardt = rec.line_count == 0;
  if (rec.all_eckardt)
    for (const ProjPoint& p : s.points()) rec.all_eckardt = rec.all_eckardt && s.is_eckardt(p);
  rec.class_count = rec.n == 0 ? 0 : unsigned(universal_equivalence(s).class_count());
  rec.exceptional = rec.line_count == 0 && rec.all_eckardt && rec.n >= 2;
  return rec;
}

bool dichotomy_holds(const CensusRecord& r) {
  if (!r.smooth || r.n < 2) return true;
  if (r.exceptional) return r.n == 3 && r.class_count == r.n;
  return r.class_count == 1;
}

}  // namespace

const std::array<Expo, 20>& census_monomials() {
  static const std::array<Expo, 20> mono = make_monomials();
  return mono;
}

FieldForm form_of_mask(uint32_t mask) {
  auto f2 = FieldSpec::get(2, 1);
  const auto& mono = census_monomials();
  FieldForm f(3);
  for (int t = 0; t < 20; ++t)
    if (mask >> t & 1) f.add_term(mono[t], fe(f2, 1));
  return f;
}

uint32_t mask_of_form(const FieldForm& f) {
  const auto& mono = census_monomials();
  uint32_t mask = 0;
  for (const auto& [e, c] : f.terms()) {
    auto it = std::find(mono.begin(), mono.end(), e);
    if (it == mono.end() || c.index() != 1) throw Error("mask_of_form: not a GF(2) cubic");
    mask |= uint32_t(1) << (it - mono.begin());
  }
  return mask;
}

CensusSummary run_census(unsigned bound, unsigned jobs, std::vector<CensusRecord>* records) {
  CensusSummary sum;
  sum.bound = std::min(bound, kMaxBound);
  sum.total_forms = kFormCount - 1;
  if (jobs == 0) jobs = 1;

  // Sieve: union over covering fields of the forms singular at a point.
  std::vector<uint8_t> singular(kFormCount, 0);
  const auto& mono = census_monomials();
  for (unsigned e : covering_degrees(sum.bound))
    for (const ProjPoint& p : enumerate_proj_points(FieldSpec::get(2, e)))
      mark_singular_at(p, mono, singular);

  if (records) records->assign(kFormCount - 1, CensusRecord{});

  struct Shard {
    CensusSummary sum;
  };
  std::vector<Shard> shards(jobs);
  std::vector<std::thread> pool;
  uint32_t chunk = (kFormCount - 1 + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    uint32_t lo = 1 + w * chunk, hi = std::min<uint64_t>(kFormCount, uint64_t(lo) + chunk);
    pool.emplace_back([&, w, lo, hi] {
      Shard& sh = shards[w];
      for (uint32_t mask = lo; mask < hi; ++mask) {
        CensusRecord rec;
        if (singular[mask]) {
          rec.mask = mask;
        } else {
          rec = analyze_smooth_form(mask);
          ++sh.sum.smooth_count;
          if (rec.n >= 2) ++sh.sum.n_ge2_count;
          if (rec.exceptional) {
            ++sh.sum.exceptional_count;
            sh.sum.exceptional_masks.push_back(mask);
          }
          if (!dichotomy_holds(rec)) ++sh.sum.dichotomy_violations;
        }
        if (records) (*records)[mask - 1] = rec;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const Shard& sh : shards) {
    sum.smooth_count += sh.sum.smooth_count;
    sum.n_ge2_count += sh.sum.n_ge2_count;
    sum.exceptional_count += sh.sum.exceptional_count;
    sum.dichotomy_violations += sh.sum.dichotomy_violations;
    sum.exceptional_masks.insert(sum.exceptional_masks.end(), sh.sum.exceptional_masks.begin(),
                                 sh.sum.exceptional_masks.end());
  }
  std::sort(sum.exceptional_masks.begin(), sum.exceptional_masks.end());
  return sum;
}

CensusRecord analyze_mask_slow(uint32_t mask, unsigned bound) {
  if (mask == 0 || mask >= kFormCount) throw Error("census mask out of range");
  FieldForm f = form_of_mask(mask);
  CensusRecord rec;
  rec.mask = mask;

  // Direct singular scan over each covering field: embed the form (GF(2)
  // coefficients carry over index-identically) and test the gradient.
  for (unsigned e : covering_degrees(std::min(bound, kMaxBound))) {
    auto target = FieldSpec::get(2, e);
    FieldForm g =
        f.map_coeffs<FieldElement>([&](const FieldElement& c) { return fe(target, c.index()); });
    std::array<FieldForm, 4> grad;
    for (int j = 0; j < 4; ++j) grad[j] = g.partial(j);
    for (const ProjPoint& p : enumerate_proj_points(target)) {
      bool sing = true;
      for (int j = 0; j < 4 && sing; ++j) sing = grad[j].eval(p.coords()).is_zero();
      if (sing) return rec;  // smooth flag stays false
    }
  }
  return analyze_smooth_form(mask);
}

std::string census_tsv_header() {
  return "mask\tsmooth\tn\tlines\tall_eckardt\tclasses\texceptional";
}

std::string census_tsv_row(const CensusRecord& r) {
  std::ostringstream os;
  os << r.mask << '\t' << int(r.smooth) << '\t' << r.n << '\t' << r.line_count << '\t'
     << int(r.all_eckardt) << '\t' << r.class_count << '\t' << int(r.exceptional);
  return os.str();
}

}  // namespace cubicml
