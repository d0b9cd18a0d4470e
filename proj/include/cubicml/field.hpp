#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubicml {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// GF(p^m) in polynomial-basis representation with a fixed canonical
/// modulus.  Elements are packed indices sum(c_i * p^i); for p = 2 the
/// index is just the coefficient bitmask, so addition is XOR.
/// Multiplication and inversion go through log/antilog tables built once
/// at construction.  Immutable after construction.
class FieldSpec {
 public:
  // Cached canonical field per (p, m).  The modulus is the monic
  // irreducible polynomial of degree m over GF(p) with the smallest
  // packed encoding; irreducibility is certified by trial division
  // against every monic polynomial of degree <= m/2.
  static std::shared_ptr<const FieldSpec> get(unsigned p, unsigned m);

  unsigned p() const { return p_; }
  unsigned m() const { return m_; }
  unsigned q() const { return q_; }

  // Dense modulus coefficients, degree m, monic: modulus()[i] is the
  // coefficient of x^i, modulus()[m] == 1.
  const std::vector<unsigned>& modulus() const { return modulus_; }

  unsigned add(unsigned a, unsigned b) const;
  unsigned sub(unsigned a, unsigned b) const;
  unsigned neg(unsigned a) const;
  unsigned mul(unsigned a, unsigned b) const;
  unsigned inv(unsigned a) const;
  unsigned pow(unsigned a, unsigned long long e) const;
  unsigned frobenius(unsigned a) const { return pow(a, p_); }

  std::vector<unsigned> coeffs(unsigned a) const;  // length m, base-p digits
  unsigned from_coeffs(const std::vector<unsigned>& c) const;

  std::string to_string(unsigned a) const;  // "[c0,c1,...]"

  static constexpr unsigned kMaxQ = 1u << 16;

 private:
  FieldSpec(unsigned p, unsigned m);

  unsigned mul_slow(unsigned a, unsigned b) const;  // used to build tables

  unsigned p_, m_, q_;
  std::vector<unsigned> modulus_;
  std::vector<unsigned> log_;   // log_[a] for a != 0
  std::vector<unsigned> exp_;   // exp_[k] = g^k, k in [0, 2(q-1))
};

/// Element of a FieldSpec.  Mixed-field arithmetic throws.
class FieldElement {
 public:
  FieldElement() : spec_(nullptr), v_(0) {}
  FieldElement(const FieldSpec* spec, unsigned v) : spec_(spec), v_(v) {}

  const FieldSpec* spec() const { return spec_; }
  unsigned index() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  FieldElement operator+(const FieldElement& o) const { return bin(o, &FieldSpec::add); }
  FieldElement operator-(const FieldElement& o) const { return bin(o, &FieldSpec::sub); }
  FieldElement operator*(const FieldElement& o) const { return bin(o, &FieldSpec::mul); }
  FieldElement operator-() const { return {spec_, spec_->neg(v_)}; }
  FieldElement inverse() const {
    if (v_ == 0) throw Error("inversion of zero field element");
    return {spec_, spec_->inv(v_)};
  }
  FieldElement pow(unsigned long long e) const { return {spec_, spec_->pow(v_, e)}; }
  FieldElement frobenius() const { return {spec_, spec_->frobenius(v_)}; }

  bool operator==(const FieldElement& o) const { return spec_ == o.spec_ && v_ == o.v_; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
  bool operator<(const FieldElement& o) const { return v_ < o.v_; }

  std::vector<unsigned> coeffs() const { return spec_->coeffs(v_); }
  std::string to_string() const { return spec_->to_string(v_); }

 private:
  FieldElement bin(const FieldElement& o, unsigned (FieldSpec::*op)(unsigned, unsigned) const) const {
    if (spec_ != o.spec_) throw Error("mixed-field operands");
    return {spec_, (spec_->*op)(v_, o.v_)};
  }
  const FieldSpec* spec_;
  unsigned v_;
};

inline FieldElement fe(const std::shared_ptr<const FieldSpec>& s, unsigned v) {
  return FieldElement(s.get(), v);
}

/// Ring embedding GF(p^d) -> GF(p^m) for d | m, fixed per (source, target)
/// pair and cached.  Among the d conjugate roots of the source modulus in
/// the target, the one with the lexicographically smallest coefficient
/// vector is chosen.
FieldElement embed_tower(const FieldElement& a, const FieldSpec* target);

}  // namespace cubicml
