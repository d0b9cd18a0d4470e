#include "cubicml/harness.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace cubicml {
namespace harness {

namespace {

std::shared_ptr<const FieldSpec> spec_for_q(unsigned q) {
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    unsigned m = 0, t = q;
    while (t % p == 0) {
      t /= p;
      ++m;
    }
    if (t == 1 && m > 0) return FieldSpec::get(p, m);
  }
  throw Error("unsupported field size " + std::to_string(q));
}

Surface surface_from(const ParsedForm& pf, unsigned q) {
  if (pf.domain == Domain::Field) return Surface(*pf.field_form, pf.field);
  auto spec = spec_for_q(q);
  if (pf.domain == Domain::Integer) return Surface(reduce_mod_p(*pf.int_form, spec), spec);
  // Padic domain: reduce mod 2.
  auto f2 = FieldSpec::get(2, 1);
  FieldForm g = pf.padic_form->map_coeffs<FieldElement>(
      [&](const PadicScalar& c) { return fe(f2, c.mod2()); });
  return Surface(g, f2);
}

/// Standard 0/1 integer lift of a GF(2) form (used for the mod-2 status
/// of the normalized Hessian).
IntForm integer_lift_gf2(const FieldForm& f) {
  IntForm out(f.degree());
  for (const auto& [e, c] : f.terms()) out.add_term(e, BigInt(c.index()));
  return out;
}

/// Hessian mod-2 status of a surface: "nonzero", "zero", or "n/a" when no
/// canonical integer model is available.
std::string hessian_mod2_status(const ParsedForm& pf) {
  IntForm model(3);
  if (pf.domain == Domain::Integer) {
    model = *pf.int_form;
  } else if (pf.domain == Domain::Field && pf.field->q() == 2) {
    model = integer_lift_gf2(*pf.field_form);
  } else {
    return "n/a";
  }
  FieldForm h = reduce_mod_p(hessian_star(model), FieldSpec::get(2, 1));
  return h.is_zero() ? "zero" : "nonzero";
}

std::string join_points(const std::vector<ProjPoint>& pts) {
  std::string s;
  for (const ProjPoint& p : pts) {
    if (!s.empty()) s += " ";
    s += p.to_string();
  }
  return s;
}

void print_partition(std::ostream& out, const std::string& title, const Surface& s,
                     const Partition& part) {
  out << title << ": " << part.class_count() << "\n";
  for (const auto& cls : part.classes()) {
    out << "  class " << cls.front() << ":";
    for (int i : cls) out << " " << s.points()[i].to_string();
    out << "\n";
  }
}

void print_table(std::ostream& out, const std::string& title,
                 const std::vector<std::vector<int>>& t) {
  out << title << "\n";
  for (const auto& row : t) {
    for (size_t j = 0; j < row.size(); ++j) out << (j ? "\t" : "\t") << row[j];
    out << "\n";
  }
}

// ---------------------------------------------------------------- verify

struct Assertion {
  std::string name;
  std::string anchor;
  std::function<bool()> run;
};

struct Scenario {
  std::string name;
  std::vector<Assertion> asserts;
};

bool orders_subset(const CMLReport& rep, std::vector<int> allowed) {
  for (int o : rep.orders)
    if (std::find(allowed.begin(), allowed.end(), o) == allowed.end()) return false;
  return true;
}

std::vector<Scenario> build_scenarios() {
  std::vector<Scenario> out;

  out.push_back(
      {"v1-classes",
       {
           {"four rational points",
            "rescaled model over GF(2): point census (1:0:0:0) (1:0:0:1) (1:0:1:0) (1:0:1:1)",
            [] {
              Surface s(builtin::v1_mod2(), FieldSpec::get(2, 1));
              auto f2 = s.field();
              std::vector<ProjPoint> expect{
                  make_point(f2, {1, 0, 0, 0}), make_point(f2, {1, 0, 0, 1}),
                  make_point(f2, {1, 0, 1, 0}), make_point(f2, {1, 0, 1, 1})};
              return s.points() == expect && s.lines().empty();
            }},
           {"universal classes split 1 + 3",
            "class X0 = {(1:0:0:0)}, class X1 = the three points with x2 or x3 odd",
            [] {
              Surface s(builtin::v1_mod2(), FieldSpec::get(2, 1));
              Partition u = universal_equivalence(s);
              auto cls = u.classes();
              return cls.size() == 2 && cls[0] == std::vector<int>{0} &&
                     cls[1] == std::vector<int>{1, 2, 3};
            }},
           {"composition table X0.X0 = X1, X1.X1 = X1, X0.X1 = X0",
            "two-class collinearity table of the four-point surface",
            [] {
              Surface s(builtin::v1_mod2(), FieldSpec::get(2, 1));
              Partition u = universal_equivalence(s);
              CMLTable t = build_cml(s, u, 1);
              return t.raw[0][0] == 1 && t.raw[1][1] == 1 && t.raw[0][1] == 0 &&
                     t.raw[1][0] == 0;
            }},
       }});

  out.push_back(
      {"hessian-exceptional",
       {
           {"single rational point, Eckardt, no lines",
            "one-point reduction: the surface with exactly one point over GF(2)",
            [] {
              Surface s(builtin::one_point_mod2(), FieldSpec::get(2, 1));
              return s.points().size() == 1 && s.singular_rational_points().empty() &&
                     s.lines().empty() && s.is_eckardt(s.points()[0]);
            }},
           {"normalized Hessian does not vanish mod 2",
            "quarter-determinant of second partials of the integer model, reduced mod 2",
            [] {
              FieldForm h =
                  reduce_mod_p(hessian_star(builtin::family_111()), FieldSpec::get(2, 1));
              return !h.is_zero();
            }},
       }});

  out.push_back(
      {"manin-classes",
       {
           {"nine points, no lines, all Eckardt",
            "classical nine-point diagonal cubic over GF(4)",
            [] {
              Surface s(builtin::manin_gf4(), FieldSpec::get(2, 2));
              if (s.points().size() != 9 || !s.lines().empty()) return false;
              for (const ProjPoint& p : s.points())
                if (!s.is_eckardt(p)) return false;
              return true;
            }},
           {"universal equivalence is nine singletons",
            "each point its own class: n = 9 classes at q = 4",
            [] {
              Surface s(builtin::manin_gf4(), FieldSpec::get(2, 2));
              return universal_equivalence(s) == Partition::singletons(9);
            }},
           {"loop of exponent 3, axioms pass, base independent",
            "elementary abelian 3-group structure of the nine classes",
            [] {
              Surface s(builtin::manin_gf4(), FieldSpec::get(2, 2));
              Partition u = universal_equivalence(s);
              CMLTable t = build_cml(s, u, 0);
              CMLReport rep = verify_cml_axioms(t);
              return rep.all_pass() && orders_subset(rep, {1, 3}) &&
                     base_independence_check(s, u);
            }},
       }});

  out.push_back(
      {"phi1-reduction",
       {
           {"rescaling divides exactly by 8 and reduces to the four-point model",
            "diag(1,8,2,2) substitution into the integer family, then division by 2^3",
            [] {
              IntForm g = phi1_transform(builtin::family_111());
              return reduce_mod_p(g, FieldSpec::get(2, 1)) == builtin::v1_mod2();
            }},
           {"reduction is independent of the even family parameters",
            "parameters enter with coefficient 2, invisible mod 2",
            [] {
              return reduce_mod_p(phi1_transform(builtin::family(3, 1, 1)),
                                  FieldSpec::get(2, 1)) == builtin::v1_mod2();
            }},
           {"leading coefficient of T0^2 T1 stays odd across the family",
            "unit leading coefficient survives the rescaling",
            [] {
              for (int b0 = 0; b0 < 4; ++b0)
                for (int b1 = 0; b1 < 4; ++b1) {
                  auto lead = phi1_transform(builtin::family(b0, b1, 2)).coefficient({2, 1, 0, 0});
                  if (!lead || *lead % 2 == 0) return false;
                }
              return true;
            }},
       }});

  out.push_back(
      {"hensel-contracts",
       {
           {"point lift reaches full precision with doubling residuals",
            "multivariate Newton iteration over Z/2^64",
            [] {
              FormT<PadicScalar> f = reduce_mod_2n(builtin::diagonal(), 64);
              std::array<PadicScalar, 4> start{PadicScalar(1, 64), PadicScalar(1, 64),
                                               PadicScalar(0, 64), PadicScalar(0, 64)};
              LiftLog log;
              PadicPoint p = hensel_lift_point(f, start, 0, 1, &log);
              if (!f.eval(p.x).is_zero()) return false;
              for (size_t i = 0; i + 1 < log.residual_valuations.size(); ++i)
                if (log.residual_valuations[i + 1] <
                    std::min(2 * log.residual_valuations[i], 64u))
                  return false;
              return true;
            }},
           {"line lift is independent of the starting lift",
            "smooth Fano scheme: the reduced line lifts uniquely",
            [] {
              FormT<PadicScalar> f = reduce_mod_2n(builtin::diagonal(), 64);
              auto f2 = FieldSpec::get(2, 1);
              ProjLine l =
                  ProjLine::through(make_point(f2, {1, 1, 0, 0}), make_point(f2, {0, 0, 1, 1}));
              LineChart a = hensel_lift_line(f, l);
              std::array<PadicScalar, 4> other{a.coef[0] + PadicScalar(2, 64),
                                               a.coef[1] + PadicScalar(4, 64),
                                               a.coef[2] + PadicScalar(6, 64),
                                               a.coef[3] + PadicScalar(2, 64)};
              LineChart b = hensel_lift_line(f, l, &other);
              return a.coef == b.coef;
            }},
           {"transversal triple lifts with zero residuals",
            "collinear triple of the reduction lifted to exactly collinear points",
            [] {
              FormT<PadicScalar> f = reduce_mod_2n(builtin::diagonal(), 64);
              auto f2 = FieldSpec::get(2, 1);
              LiftedTriple t =
                  lift_collinear_triple(f, make_point(f2, {1, 1, 0, 0}),
                                        make_point(f2, {1, 0, 1, 0}), make_point(f2, {0, 1, 1, 0}));
              return t.loss == 0 && f.eval(t.p1.x).is_zero() && f.eval(t.p2.x).is_zero() &&
                     f.eval(t.p3.x).is_zero();
            }},
       }});

  out.push_back(
      {"tangent-limit",
       {
           {"valuation profile nondecreasing, secants base-rational",
            "conjugate-point secants converging to the tangent line at the base point",
            [] {
              FormT<QuadExtScalar> f = builtin::manin_quadext(64);
              PadicPointQ p;
              p.unit_coord = 0;
              p.x = {QuadExtScalar::from_int(1, 64), QuadExtScalar::from_int(-1, 64),
                     QuadExtScalar::from_int(0, 64), QuadExtScalar::from_int(0, 64)};
              ExperimentResult res = tangent_limit_experiment(f, p, 2, 10);
              if (!res.nondecreasing || res.rows.size() != 10) return false;
              for (const ExperimentRow& r : res.rows)
                if (!r.rational_line || !r.third_base_rational) return false;
              return true;
            }},
       }});

  out.push_back(
      {"tangency-locus",
       {
           {"tangency curve is non-singular at the witness point",
            "mixed second partials criterion in an adapted frame",
            [] {
              Surface s(builtin::w_mod2(), FieldSpec::get(2, 1));
              auto f2 = s.field();
              return s.tangency_locus_check(make_point(f2, {1, 0, 1, 0}),
                                            make_point(f2, {1, 0, 0, 0}));
            }},
       }});

  out.push_back(
      {"loop-axioms",
       {
           {"CML axioms pass on every golden surface",
            "identity, Latin square, commutativity, Moufang identity, orders dividing 6",
            [] {
              auto f2 = FieldSpec::get(2, 1);
              std::vector<Surface> golden;
              golden.emplace_back(builtin::v1_mod2(), f2);
              golden.emplace_back(builtin::one_point_mod2(), f2);
              golden.emplace_back(reduce_mod_p(builtin::diagonal(), f2), f2);
              golden.emplace_back(builtin::manin_gf4(), FieldSpec::get(2, 2));
              for (const Surface& s : golden) {
                if (s.points().empty()) return false;
                Partition u = universal_equivalence(s);
                CMLTable t = build_cml(s, u, 0);
                if (!verify_cml_axioms(t).all_pass()) return false;
              }
              return true;
            }},
           {"universal equivalence equals the meet of the power refinements",
            "U = U2 intersected with U3 on every golden surface",
            [] {
              auto f2 = FieldSpec::get(2, 1);
              std::vector<Surface> golden;
              golden.emplace_back(builtin::v1_mod2(), f2);
              golden.emplace_back(builtin::one_point_mod2(), f2);
              golden.emplace_back(reduce_mod_p(builtin::diagonal(), f2), f2);
              golden.emplace_back(builtin::manin_gf4(), FieldSpec::get(2, 2));
              for (const Surface& s : golden) {
                Partition u = universal_equivalence(s);
                Partition meet =
                    intersect_partitions(property_equivalence(s, 2), property_equivalence(s, 3));
                if (!(u == meet) || !u.refines(property_equivalence(s, 2)) ||
                    !u.refines(property_equivalence(s, 3)))
                  return false;
              }
              return true;
            }},
       }});

  return out;
}

const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> s = build_scenarios();
  return s;
}

// ------------------------------------------------------------------ lift

ProjPoint parse_gf2_point(const std::string& arg) {
  auto f2 = FieldSpec::get(2, 1);
  std::array<unsigned, 4> idx{};
  std::istringstream is(arg);
  std::string tok;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(is, tok, ',')) throw Error("point argument needs 4 comma-separated bits");
    int v = std::stoi(tok);
    if (v != 0 && v != 1) throw Error("point argument bits must be 0 or 1");
    idx[i] = unsigned(v);
  }
  return make_point(f2, idx);
}

std::array<long long, 4> parse_int_point(const std::string& arg) {
  std::array<long long, 4> out{};
  std::istringstream is(arg);
  std::string tok;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(is, tok, ','))
      throw Error("point argument needs 4 comma-separated integers");
    out[i] = std::stoll(tok);
  }
  return out;
}

FormT<PadicScalar> padic_model(const ParsedForm& pf, unsigned n) {
  if (pf.domain == Domain::Integer) return reduce_mod_2n(*pf.int_form, n);
  if (pf.domain == Domain::Padic) {
    if (pf.precision != n)
      return pf.padic_form->map_coeffs<PadicScalar>(
          [&](const PadicScalar& c) { return PadicScalar(c.residue(), n); });
    return *pf.padic_form;
  }
  throw Error("lifting needs an integer or 2-adic surface model");
}

}  // namespace

ParsedForm load_surface(const std::string& spec_string) {
  if (spec_string.rfind("builtin:", 0) == 0) return builtin::by_name(spec_string.substr(8));
  std::ifstream in(spec_string);
  if (!in) throw Error("cannot open surface file: " + spec_string);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_form(buf.str());
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const Scenario& s : scenarios()) out.push_back(s.name);
  return out;
}

int cmd_analyze(const Options& opt, std::ostream& out) {
  ParsedForm pf = load_surface(opt.surface);
  Surface s = surface_from(pf, opt.field_q);
  out << "field: GF(" << s.q() << ")\n";
  out << "points: " << s.points().size() << " smooth, " << s.singular_rational_points().size()
      << " singular\n";
  if (!s.points().empty()) out << "  smooth: " << join_points(s.points()) << "\n";
  if (!s.singular_rational_points().empty())
    out << "  warning: singular rational points: " << join_points(s.singular_rational_points())
        << "\n";
  out << "lines: " << s.lines().size() << "\n";

  std::string eck;
  unsigned eck_count = 0;
  for (const ProjPoint& p : s.points()) {
    if (s.has_line_through(p)) continue;
    if (s.is_eckardt(p)) {
      eck += (eck.empty() ? "" : " ") + p.to_string();
      ++eck_count;
    }
  }
  out << "eckardt points: " << eck_count << (eck.empty() ? "" : " " + eck) << "\n";

  auto scan = s.singular_points_up_to(opt.bound);
  out << "singular scan: requested degree " << scan.requested_bound << ", effective "
      << scan.effective_bound << ", found " << scan.found.size();
  for (const auto& [d, p] : scan.found) out << " [deg " << d << "] " << p;
  out << "\n";
  out << "hessian mod 2: " << hessian_mod2_status(pf) << "\n";

  if (s.points().empty()) {
    out << "universal classes: 0\n";
    return 0;
  }
  Partition u = universal_equivalence(s);
  print_partition(out, "universal classes", s, u);
  out << "U2 classes: " << property_equivalence(s, 2).class_count() << "\n";
  out << "U3 classes: " << property_equivalence(s, 3).class_count() << "\n";

  try {
    CMLTable t = build_cml(s, u, 0);
    out << "loop base: " << s.points()[t.class_labels[t.base]].to_string() << "\n";
    print_table(out, "composition table (classes by label):", t.raw);
    print_table(out, "loop table:", t.prod);
    CMLReport rep = verify_cml_axioms(t);
    out << "axioms: identity=" << rep.identity << " latin=" << rep.latin
        << " commutative=" << rep.commutative << " moufang=" << rep.moufang
        << " orders6=" << rep.orders_divide_6 << " split=" << rep.splits_exp2_exp3
        << " associative=" << rep.associative << "\n";
    if (t.n <= 9) out << "base independent: " << (base_independence_check(s, u) ? 1 : 0) << "\n";
  } catch (const Error& e) {
    out << "loop table unavailable: " << e.what() << "\n";
  }
  return 0;
}

int cmd_census(const Options& opt, std::ostream& out) {
  std::vector<CensusRecord> records;
  bool stream = opt.format == "tsv";
  CensusSummary sum = run_census(opt.bound, opt.jobs, stream ? &records : nullptr);
  if (stream) {
    out << census_tsv_header() << "\n";
    for (const CensusRecord& r : records) out << census_tsv_row(r) << "\n";
  }
  out << "census: bound " << sum.bound << ", forms " << sum.total_forms << ", smooth "
      << sum.smooth_count << ", n>=2 " << sum.n_ge2_count << ", exceptional "
      << sum.exceptional_count << ", violations " << sum.dichotomy_violations << "\n";
  bool ok = sum.dichotomy_violations == 0 && sum.exceptional_count > 0;
  out << "dichotomy: " << (ok ? "PASS" : "FAIL")
      << " (every n>=2 surface has one class unless line-free and all-Eckardt; "
         "exceptional surfaces have exactly three singleton classes)\n";
  return ok ? 0 : 1;
}

int cmd_verify(const std::string& scenario, std::ostream& out) {
  for (const Scenario& sc : scenarios()) {
    if (sc.name != scenario) continue;
    bool all = true;
    for (const Assertion& a : sc.asserts) {
      bool ok = false;
      std::string err;
      try {
        ok = a.run();
      } catch (const Error& e) {
        err = e.what();
      }
      all = all && ok;
      out << (ok ? "PASS" : "FAIL") << "  " << a.name << "  [" << a.anchor << "]";
      if (!err.empty()) out << "  error: " << err;
      out << "\n";
    }
    out << "scenario " << sc.name << ": " << (all ? "PASS" : "FAIL") << "\n";
    return all ? 0 : 1;
  }
  out << "unknown scenario: " << scenario << "\nknown:";
  for (const std::string& n : scenario_names()) out << " " << n;
  out << "\n";
  return 2;
}

int cmd_lift(const Options& opt, const std::string& mode,
             const std::vector<std::string>& point_args, std::ostream& out) {
  unsigned n = opt.precision;
  if (n == 0 || n > 64) throw Error("precision must be in [1,64]");

  if (mode == "tangent-limit") {
    FormT<QuadExtScalar> f;
    PadicPointQ p;
    p.unit_coord = 0;
    if (opt.surface.empty() || opt.surface == "builtin:manin-quadext") {
      f = builtin::manin_quadext(n);
      p.x = {QuadExtScalar::from_int(1, n), QuadExtScalar::from_int(-1, n),
             QuadExtScalar::from_int(0, n), QuadExtScalar::from_int(0, n)};
    } else {
      if (point_args.size() != 1)
        throw Error("tangent-limit on a custom surface needs one base-point argument");
      f = widen_to_quad_ext(padic_model(load_surface(opt.surface), n));
      auto coords = parse_int_point(point_args[0]);
      for (int i = 0; i < 4; ++i) p.x[i] = QuadExtScalar::from_int(coords[i], n);
    }
    ExperimentResult res = tangent_limit_experiment(f, p, 2, opt.depth);
    out << "i\tv_min(r_i - R)\trational_line(bool)\tloss_bits\n";
    for (const ExperimentRow& r : res.rows)
      out << r.depth << "\t" << r.v_min << "\t" << int(r.rational_line) << "\t" << r.loss_bits
          << "\n";
    out << "nondecreasing: " << (res.nondecreasing ? 1 : 0) << "\n";
    return res.nondecreasing ? 0 : 1;
  }

  FormT<PadicScalar> f = padic_model(load_surface(opt.surface), n);

  if (mode == "point") {
    if (point_args.size() != 1) throw Error("lift point needs one point argument a,b,c,d");
    ProjPoint rp = parse_gf2_point(point_args[0]);
    std::array<PadicScalar, 4> start{PadicScalar(rp[0].index(), n), PadicScalar(rp[1].index(), n),
                                     PadicScalar(rp[2].index(), n), PadicScalar(rp[3].index(), n)};
    int unit = 0;
    while (rp[unit].is_zero()) ++unit;
    int solved = choose_solved_coord(f, start, unit);
    LiftLog log;
    PadicPoint p = hensel_lift_point(f, start, unit, solved, &log);
    out << "lifted point:";
    for (int i = 0; i < 4; ++i) out << " " << p.x[i].residue();
    out << "\nsolved coordinate: " << solved << "\nresidual valuation: >= " << n << "\n";
    out << "newton residual valuations:";
    for (unsigned v : log.residual_valuations) out << " " << v;
    out << "\n";
    return 0;
  }

  if (mode == "line") {
    if (point_args.size() != 2) throw Error("lift line needs two point arguments");
    ProjLine l = ProjLine::through(parse_gf2_point(point_args[0]), parse_gf2_point(point_args[1]));
    LineChart c = hensel_lift_line(f, l);
    out << "chart: x" << c.dep[0] << " = a*x" << c.ind[0] << " + b*x" << c.ind[1] << ", x"
        << c.dep[1] << " = c*x" << c.ind[0] << " + d*x" << c.ind[1] << "\n";
    out << "coefficients: " << c.coef[0].residue() << " " << c.coef[1].residue() << " "
        << c.coef[2].residue() << " " << c.coef[3].residue() << "\n";
    out << "residual valuation: >= " << n << "\n";
    return 0;
  }

  if (mode == "triple") {
    if (point_args.size() != 3) throw Error("lift triple needs three point arguments");
    LiftedTriple t =
        lift_collinear_triple(f, parse_gf2_point(point_args[0]), parse_gf2_point(point_args[1]),
                              parse_gf2_point(point_args[2]));
    for (const PadicPoint* p : {&t.p1, &t.p2, &t.p3}) {
      out << "point:";
      for (int i = 0; i < 4; ++i) out << " " << p->x[i].residue();
      out << "\n";
    }
    out << "precision loss: " << t.loss << "\nresidual valuation: >= " << n << "\n";
    return 0;
  }

  throw Error("unknown lift mode: " + mode);
}

int cmd_badlocus(const Options& opt, std::ostream& out) {
  unsigned q = opt.field_q;
  if (q != 2 && q != 4 && q != 8 && q != 16) throw Error("badlocus supports q in {2,4,8,16}");
  unsigned m = 0;
  for (unsigned t = q; t > 1; t /= 2) ++m;
  auto spec = FieldSpec::get(2, m);

  std::mt19937_64 rng(opt.seed + q);
  unsigned done = 0, attempts = 0;
  unsigned max_bad = 0;
  size_t min_points = size_t(-1);
  bool bad_ok = true, count_ok = true;
  long long lower = (long long)q * q - 2 * q + 1;
  while (done < opt.samples && attempts < 200 * opt.samples) {
    ++attempts;
    FieldForm g(3);
    for (int t = 0; t < 10; ++t) {
      Expo e{0, 0, 0, 0};
      int rem = 3;
      for (int i = 0; i < 3; ++i) {
        int k = std::uniform_int_distribution<int>(0, rem)(rng);
        e[i] = uint8_t(k);
        rem -= k;
      }
      e[3] = uint8_t(rem);
      g.add_term(e, fe(spec, unsigned(rng() % q)));
    }
    if (g.is_zero()) continue;
    Surface s(g, spec);
    if (s.points().empty() || !s.singular_rational_points().empty()) continue;
    ++done;

    const ProjPoint& p = s.points()[rng() % s.points().size()];
    unsigned count = s.bad_locus_count(p);
    max_bad = std::max(max_bad, count);
    long long excess = (long long)count - 9ll * q - 9;
    if (excess > 0 && excess * excess > 3136ll * q) bad_ok = false;

    min_points = std::min(min_points, s.points().size());
    if ((long long)s.points().size() < lower) count_ok = false;
  }

  out << "q=" << q << " samples=" << done << " (of " << opt.samples << " requested)\n";
  out << "bad locus: max |B_P| = " << max_bad << ", bound 9q + 56*sqrt(q) + 9: "
      << (bad_ok ? "PASS" : "FAIL") << "\n";
  out << "point count: min n = " << min_points << ", lower bound q^2 - 2q + 1 = " << lower << ": "
      << (count_ok ? "PASS" : "FAIL") << "\n";

  bool partner_ok = true;
  if (q == 16) {
    Surface s(builtin::manin_gf16(), spec);
    const auto& pts = s.points();
    unsigned pairs = 0;
    for (unsigned k = 0; k < opt.samples && pts.size() >= 3; ++k) {
      size_t i = rng() % pts.size(), j = rng() % pts.size();
      if (i == j) continue;
      ++pairs;
      bool found = false;
      for (size_t r = 0; r < pts.size() && !found; ++r) {
        if (r == i || r == j) continue;
        found = s.is_general_position(pts[i], pts[r]) && s.is_general_position(pts[j], pts[r]);
      }
      partner_ok = partner_ok && found;
    }
    out << "general-position partners (nine-point model over GF(16)): " << pairs << " pairs, "
        << (partner_ok ? "PASS" : "FAIL") << "\n";
  }

  bool ok = bad_ok && count_ok && partner_ok && done == opt.samples;
  if (done != opt.samples) out << "sampling shortfall\n";
  return ok ? 0 : 1;
}

}  // namespace harness
}  // namespace cubicml
