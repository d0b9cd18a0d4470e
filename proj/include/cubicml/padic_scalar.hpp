#pragma once

#include <bit>
#include <cstdint>

#include "cubicml/field.hpp"

namespace cubicml {

/// Residue modulo 2^N at fixed absolute precision N (N <= 64, default 64).
/// Valuation is the trailing-zero count, capped at N; a value whose
/// valuation hits the cap reports v >= N via at_valuation_cap().
class PadicScalar {
 public:
  static constexpr unsigned kDefaultPrecision = 64;

  PadicScalar() : v_(0), n_(kDefaultPrecision) {}
  PadicScalar(uint64_t v, unsigned n) : n_(n) {
    if (n == 0 || n > 64) throw Error("padic precision must be in [1,64]");
    v_ = v & mask();
  }
  static PadicScalar from_int(long long x, unsigned n = kDefaultPrecision) {
    return PadicScalar(static_cast<uint64_t>(x), n);
  }

  uint64_t residue() const { return v_; }
  unsigned precision() const { return n_; }
  uint64_t mask() const { return n_ == 64 ? ~uint64_t(0) : ((uint64_t(1) << n_) - 1); }

  unsigned valuation() const {
    if (v_ == 0) return n_;
    unsigned v = std::countr_zero(v_);
    return v < n_ ? v : n_;
  }
  bool at_valuation_cap() const { return v_ == 0; }
  bool is_unit() const { return v_ & 1; }
  bool is_zero() const { return v_ == 0; }

  PadicScalar operator+(const PadicScalar& o) const { return {(v_ + o.v_) & mask(), chk(o)}; }
  PadicScalar operator-(const PadicScalar& o) const { return {(v_ - o.v_) & mask(), chk(o)}; }
  PadicScalar operator*(const PadicScalar& o) const { return {(v_ * o.v_) & mask(), chk(o)}; }
  PadicScalar operator-() const { return {(~v_ + 1) & mask(), n_}; }

  PadicScalar inverse() const {
    if (!is_unit()) throw Error("padic inversion of non-unit");
    // Newton: x <- x(2 - ax), doubling correct bits each step.
    uint64_t x = 1;
    for (int i = 0; i < 6; ++i) x = x * (2 - v_ * x);
    return {x & mask(), n_};
  }

  /// Exact division by 2^k; caller accounts the k bits of precision loss.
  PadicScalar shifted_down(unsigned k) const { return {v_ >> k, n_}; }

  bool operator==(const PadicScalar& o) const { return v_ == o.v_ && n_ == o.n_; }
  bool operator!=(const PadicScalar& o) const { return !(*this == o); }

  unsigned mod2() const { return unsigned(v_ & 1); }

 private:
  unsigned chk(const PadicScalar& o) const {
    if (n_ != o.n_) throw Error("padic precision mismatch");
    return n_;
  }
  uint64_t v_;
  unsigned n_;
};

/// a + b*theta in the unramified quadratic extension with
/// theta^2 + theta + 1 = 0.  Conjugation maps (a,b) to (a-b, -b).
class QuadExtScalar {
 public:
  QuadExtScalar() = default;
  QuadExtScalar(PadicScalar a, PadicScalar b) : a_(a), b_(b) {}
  static QuadExtScalar from_int(long long x, unsigned n = PadicScalar::kDefaultPrecision) {
    return {PadicScalar::from_int(x, n), PadicScalar::from_int(0, n)};
  }
  static QuadExtScalar theta(unsigned n = PadicScalar::kDefaultPrecision) {
    return {PadicScalar::from_int(0, n), PadicScalar::from_int(1, n)};
  }

  const PadicScalar& base() const { return a_; }
  const PadicScalar& theta_part() const { return b_; }
  unsigned precision() const { return a_.precision(); }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_base_rational() const { return b_.is_zero(); }
  unsigned valuation() const { return std::min(a_.valuation(), b_.valuation()); }
  bool is_unit() const { return a_.is_unit() || b_.is_unit(); }

  QuadExtScalar operator+(const QuadExtScalar& o) const { return {a_ + o.a_, b_ + o.b_}; }
  QuadExtScalar operator-(const QuadExtScalar& o) const { return {a_ - o.a_, b_ - o.b_}; }
  QuadExtScalar operator-() const { return {-a_, -b_}; }
  QuadExtScalar operator*(const QuadExtScalar& o) const {
    // (a1 + b1 t)(a2 + b2 t) with t^2 = -1 - t
    PadicScalar bb = b_ * o.b_;
    return {a_ * o.a_ - bb, a_ * o.b_ + b_ * o.a_ - bb};
  }

  QuadExtScalar conj() const { return {a_ - b_, -b_}; }
  PadicScalar norm_base() const {
    QuadExtScalar n = (*this) * conj();
    if (!n.b_.is_zero()) throw Error("norm left the base ring");
    return n.a_;
  }

  QuadExtScalar inverse() const {
    if (!is_unit()) throw Error("padic inversion of non-unit");
    PadicScalar n = norm_base();
    PadicScalar ninv = n.inverse();
    QuadExtScalar c = conj();
    return {c.a_ * ninv, c.b_ * ninv};
  }

  QuadExtScalar shifted_down(unsigned k) const { return {a_.shifted_down(k), b_.shifted_down(k)}; }

  bool operator==(const QuadExtScalar& o) const { return a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const QuadExtScalar& o) const { return !(*this == o); }

  /// Reduction mod 2 as an element index of GF(4) (c0 + 2*c1 packing).
  unsigned mod2_gf4() const { return a_.mod2() + 2 * b_.mod2(); }

 private:
  PadicScalar a_, b_;
};

}  // namespace cubicml
