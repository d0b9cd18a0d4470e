#include "cubicml/form.hpp"

#include <sstream>

namespace cubicml {

IntForm hessian_star(const IntForm& f) {
  if (f.degree() != 3) throw Error("hessian_star: form must be a cubic");

  std::array<std::array<IntForm, 4>, 4> h;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) h[i][j] = f.partial(i).partial(j);

  // 4x4 determinant by Laplace expansion along the first row, with 2x2
  // minors of the bottom two rows shared across the four cofactors.
  auto minor2 = [&](int c1, int c2) { return h[2][c1] * h[3][c2] - h[2][c2] * h[3][c1]; };
  IntForm m01 = minor2(0, 1), m02 = minor2(0, 2), m03 = minor2(0, 3);
  IntForm m12 = minor2(1, 2), m13 = minor2(1, 3), m23 = minor2(2, 3);

  IntForm det = h[0][0] * (h[1][1] * m23 - h[1][2] * m13 + h[1][3] * m12) -
                h[0][1] * (h[1][0] * m23 - h[1][2] * m03 + h[1][3] * m02) +
                h[0][2] * (h[1][0] * m13 - h[1][1] * m03 + h[1][3] * m01) -
                h[0][3] * (h[1][0] * m12 - h[1][1] * m02 + h[1][2] * m01);

  IntForm out(det.degree());
  for (const auto& [e, c] : det.terms()) {
    if (c % 4 != 0) throw Error("hessian_star: determinant coefficient not divisible by 4");
    out.add_term(e, c / 4);
  }
  return out;
}

FieldForm reduce_mod_p(const IntForm& f, const std::shared_ptr<const FieldSpec>& spec) {
  FieldForm out(f.degree());
  const long long p = spec->p();
  for (const auto& [e, c] : f.terms()) {
    BigInt r = c % p;
    if (r < 0) r += p;
    out.add_term(e, fe(spec, r.convert_to<unsigned>()));
  }
  return out;
}

FormT<PadicScalar> reduce_mod_2n(const IntForm& f, unsigned precision) {
  FormT<PadicScalar> out(f.degree());
  BigInt mod = BigInt(1) << precision;
  for (const auto& [e, c] : f.terms()) {
    BigInt r = c % mod;
    if (r < 0) r += mod;
    out.add_term(e, PadicScalar(r.convert_to<uint64_t>(), precision));
  }
  return out;
}

FormT<QuadExtScalar> widen_to_quad_ext(const FormT<PadicScalar>& f) {
  FormT<QuadExtScalar> out(f.degree());
  for (const auto& [e, c] : f.terms())
    out.add_term(e, QuadExtScalar(c, PadicScalar(0, c.precision())));
  return out;
}

namespace {

std::vector<unsigned> parse_bracket_vector(const std::string& tok) {
  if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']')
    throw Error("malformed field coefficient: " + tok);
  std::vector<unsigned> out;
  std::string body = tok.substr(1, tok.size() - 2);
  std::stringstream ss(body);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty()) throw Error("malformed field coefficient: " + tok);
    out.push_back(static_cast<unsigned>(std::stoul(piece)));
  }
  return out;
}

}  // namespace

ParsedForm parse_form(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ParsedForm pf;
  bool have_domain = false, have_degree = false;
  unsigned degree = 0;

  auto next_tokens = [&](std::vector<std::string>& toks) -> bool {
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::stringstream ss(line);
      toks.clear();
      std::string t;
      while (ss >> t) toks.push_back(t);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  while (next_tokens(toks)) {
    if (!have_domain) {
      if (toks[0] != "domain") throw Error("surface file: expected 'domain' line");
      if (toks.size() >= 2 && toks[1] == "int") {
        pf.domain = Domain::Integer;
      } else if (toks.size() >= 4 && toks[1] == "gf") {
        pf.domain = Domain::Field;
        pf.field = FieldSpec::get(std::stoul(toks[2]), std::stoul(toks[3]));
      } else if (toks.size() >= 3 && toks[1] == "padic") {
        pf.domain = Domain::Padic;
        pf.precision = static_cast<unsigned>(std::stoul(toks[2]));
      } else {
        throw Error("surface file: unknown domain tag");
      }
      have_domain = true;
      continue;
    }
    if (!have_degree) {
      if (toks.size() != 2 || toks[0] != "degree") throw Error("surface file: expected 'degree' line");
      degree = static_cast<unsigned>(std::stoul(toks[1]));
      switch (pf.domain) {
        case Domain::Integer: pf.int_form.emplace(degree); break;
        case Domain::Field: pf.field_form.emplace(degree); break;
        case Domain::Padic: pf.padic_form.emplace(degree); break;
      }
      have_degree = true;
      continue;
    }
    if (toks.size() != 5) throw Error("surface file: term line needs 'e0 e1 e2 e3 coeff'");
    Expo e;
    unsigned sum = 0;
    for (int i = 0; i < 4; ++i) {
      unsigned long v = std::stoul(toks[i]);
      if (v > 255) throw Error("surface file: exponent out of range");
      e[i] = static_cast<uint8_t>(v);
      sum += v;
    }
    if (sum != degree) throw Error("surface file: exponent sum mismatch");
    const std::string& coeff = toks[4];
    try {
      switch (pf.domain) {
        case Domain::Integer:
          pf.int_form->add_term(e, BigInt(coeff));
          break;
        case Domain::Field:
          pf.field_form->add_term(e, fe(pf.field, pf.field->from_coeffs(parse_bracket_vector(coeff))));
          break;
        case Domain::Padic:
          pf.padic_form->add_term(e, PadicScalar(std::stoull(coeff), pf.precision));
          break;
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error("surface file: malformed coefficient '" + coeff + "'");
    }
  }

  if (!have_domain || !have_degree) throw Error("surface file: missing header");
  bool zero = (pf.int_form && pf.int_form->is_zero()) ||
              (pf.field_form && pf.field_form->is_zero()) ||
              (pf.padic_form && pf.padic_form->is_zero());
  if (zero) throw Error("form is zero");
  return pf;
}

namespace {

template <class R, class CoeffPrinter>
std::string emit_terms(const FormT<R>& f, const std::string& header, CoeffPrinter print) {
  std::ostringstream out;
  out << header << "\n";
  out << "degree " << f.degree() << "\n";
  for (const auto& [e, c] : f.terms()) {
    out << unsigned(e[0]) << " " << unsigned(e[1]) << " " << unsigned(e[2]) << " " << unsigned(e[3])
        << " " << print(c) << "\n";
  }
  return out.str();
}

}  // namespace

std::string emit_form(const IntForm& f) {
  return emit_terms(f, "domain int", [](const BigInt& c) { return c.str(); });
}

std::string emit_form(const FieldForm& f) {
  std::string header = "domain gf ? ?";
  if (!f.terms().empty()) {
    const FieldSpec* s = f.terms().begin()->second.spec();
    header = "domain gf " + std::to_string(s->p()) + " " + std::to_string(s->m());
  }
  return emit_terms(f, header, [](const FieldElement& c) { return c.to_string(); });
}

std::string emit_form(const ParsedForm& f) {
  switch (f.domain) {
    case Domain::Integer:
      return emit_form(*f.int_form);
    case Domain::Field:
      return emit_form(*f.field_form);
    case Domain::Padic:
      return emit_terms(*f.padic_form, "domain padic " + std::to_string(f.precision),
                        [](const PadicScalar& c) { return std::to_string(c.residue()); });
  }
  throw Error("emit_form: bad domain");
}

}  // namespace cubicml
