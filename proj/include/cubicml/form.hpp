#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "cubicml/field.hpp"
#include "cubicml/padic_scalar.hpp"

namespace cubicml {

using BigInt = boost::multiprecision::cpp_int;

/// Exponent tuple (e0,e1,e2,e3); canonical term order is the ascending
/// lexicographic order std::map provides on these arrays.
using Expo = std::array<uint8_t, 4>;

template <class R>
struct ring_traits;

template <>
struct ring_traits<BigInt> {
  static bool is_zero(const BigInt& x) { return x == 0; }
  static BigInt zero_like(const BigInt&) { return BigInt(0); }
};

template <>
struct ring_traits<FieldElement> {
  static bool is_zero(const FieldElement& x) { return x.is_zero(); }
  static FieldElement zero_like(const FieldElement& x) { return FieldElement(x.spec(), 0); }
};

template <>
struct ring_traits<PadicScalar> {
  static bool is_zero(const PadicScalar& x) { return x.is_zero(); }
  static PadicScalar zero_like(const PadicScalar& x) { return PadicScalar(0, x.precision()); }
};

template <>
struct ring_traits<QuadExtScalar> {
  static bool is_zero(const QuadExtScalar& x) { return x.is_zero(); }
  static QuadExtScalar zero_like(const QuadExtScalar& x) {
    return QuadExtScalar::from_int(0, x.precision());
  }
};

/// Homogeneous form in 4 variables over a commutative ring R, stored
/// sparsely.  Every stored exponent tuple sums to degree(); zero
/// coefficients are never stored.
template <class R>
class FormT {
 public:
  explicit FormT(unsigned degree = 0) : degree_(degree) {}

  unsigned degree() const { return degree_; }
  const std::map<Expo, R>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  void add_term(Expo e, const R& c) {
    if (unsigned(e[0]) + e[1] + e[2] + e[3] != degree_)
      throw Error("form term: exponent sum does not match degree");
    if (ring_traits<R>::is_zero(c)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (ring_traits<R>::is_zero(it->second)) terms_.erase(it);
    }
  }

  std::optional<R> coefficient(Expo e) const {
    auto it = terms_.find(e);
    if (it == terms_.end()) return std::nullopt;
    return it->second;
  }

  R eval(const std::array<R, 4>& x) const {
    R acc = ring_traits<R>::zero_like(x[0]);
    for (const auto& [e, c] : terms_) {
      R t = c;
      for (int i = 0; i < 4; ++i)
        for (unsigned k = 0; k < e[i]; ++k) t = t * x[i];
      acc = acc + t;
    }
    return acc;
  }

  /// Formal partial derivative; drops to degree-1 (characteristic
  /// cancellation happens through ring arithmetic).
  FormT partial(int var) const {
    if (var < 0 || var > 3) throw Error("partial_derivative: variable index out of range");
    if (degree_ == 0) return FormT(0);
    FormT out(degree_ - 1);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Expo ne = e;
      ne[var] -= 1;
      R nc = c;
      for (unsigned k = 1; k < e[var]; ++k) nc = nc + c;  // multiply by e[var]
      out.add_term(ne, nc);
    }
    return out;
  }

  FormT operator+(const FormT& o) const {
    if (degree_ != o.degree_ && !is_zero() && !o.is_zero())
      throw Error("form addition: degree mismatch");
    FormT out(is_zero() ? o.degree_ : degree_);
    for (const auto& [e, c] : terms_) out.add_term(e, c);
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
  }

  FormT operator*(const FormT& o) const {
    FormT out(degree_ + o.degree_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) {
        Expo e{uint8_t(e1[0] + e2[0]), uint8_t(e1[1] + e2[1]), uint8_t(e1[2] + e2[2]),
               uint8_t(e1[3] + e2[3])};
        out.add_term(e, c1 * c2);
      }
    return out;
  }

  FormT scaled(const R& s) const {
    FormT out(degree_);
    for (const auto& [e, c] : terms_) out.add_term(e, c * s);
    return out;
  }

  FormT negated() const {
    FormT out(degree_);
    for (const auto& [e, c] : terms_) out.add_term(e, -c);
    return out;
  }

  FormT operator-(const FormT& o) const { return *this + o.negated(); }

  bool operator==(const FormT& o) const { return degree_ == o.degree_ && terms_ == o.terms_; }

  /// Coefficient-wise ring map (reduction, embedding, widening).
  template <class S, class Fn>
  FormT<S> map_coeffs(Fn&& fn) const {
    FormT<S> out(degree_);
    for (const auto& [e, c] : terms_) out.add_term(e, fn(c));
    return out;
  }

  /// Composition with the linear change of variables x -> Mx, i.e.
  /// variable i is replaced by sum_j M[i][j] * x_j.
  FormT substitute_linear(const std::array<std::array<R, 4>, 4>& M) const {
    FormT out(degree_);
    for (const auto& [e, c] : terms_) {
      // start from the constant c as a degree-0 form, multiply linear factors
      FormT acc(0);
      acc.terms_.emplace(Expo{0, 0, 0, 0}, c);
      if (ring_traits<R>::is_zero(c)) continue;
      for (int i = 0; i < 4; ++i) {
        if (e[i] == 0) continue;
        FormT lin(1);
        for (int j = 0; j < 4; ++j) {
          Expo le{0, 0, 0, 0};
          le[j] = 1;
          lin.add_term(le, M[i][j]);
        }
        for (unsigned k = 0; k < e[i]; ++k) acc = acc * lin;
      }
      out = out + acc;
    }
    return out;
  }

 private:
  unsigned degree_;
  std::map<Expo, R> terms_;
};

using IntForm = FormT<BigInt>;
using FieldForm = FormT<FieldElement>;

/// Normalized Hessian of an integer cubic: one quarter of the determinant
/// of the 4x4 matrix of second partials, in exact integer polynomial
/// arithmetic.  The division by 4 is always exact for integer cubics and
/// is asserted.
IntForm hessian_star(const IntForm& f);

/// First polar quadric sum_i P_i * dF/dX_i of a degree-3 form.
template <class R>
FormT<R> polar_quadric(const FormT<R>& f, const std::array<R, 4>& P) {
  FormT<R> out(f.degree() == 0 ? 0 : f.degree() - 1);
  for (int i = 0; i < 4; ++i) out = out + f.partial(i).scaled(P[i]);
  return out;
}

/// Reductions between coefficient domains.
FieldForm reduce_mod_p(const IntForm& f, const std::shared_ptr<const FieldSpec>& spec);
FormT<PadicScalar> reduce_mod_2n(const IntForm& f, unsigned precision);
FormT<QuadExtScalar> widen_to_quad_ext(const FormT<PadicScalar>& f);

/// Parsed surface file: one of three coefficient domains.
enum class Domain { Integer, Field, Padic };

struct ParsedForm {
  Domain domain;
  std::shared_ptr<const FieldSpec> field;  // Field domain only
  unsigned precision = 0;                  // Padic domain only
  std::optional<IntForm> int_form;
  std::optional<FieldForm> field_form;
  std::optional<FormT<PadicScalar>> padic_form;
};

ParsedForm parse_form(const std::string& text);
std::string emit_form(const ParsedForm& f);
std::string emit_form(const IntForm& f);
std::string emit_form(const FieldForm& f);

}  // namespace cubicml
