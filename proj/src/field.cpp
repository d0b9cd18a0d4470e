#include "cubicml/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace cubicml {

namespace {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over GF(p) as packed indices sum(c_i * p^i).
std::vector<unsigned> unpack(unsigned v, unsigned p) {
  std::vector<unsigned> c;
  while (v) {
    c.push_back(v % p);
    v /= p;
  }
  return c;
}

// Remainder of a (dense, low-to-high) modulo b, in place.
void poly_mod(std::vector<unsigned>& a, const std::vector<unsigned>& b, unsigned p) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  const unsigned db = static_cast<unsigned>(b.size()) - 1;
  while (a.size() > db) {
    unsigned lead = a.back();
    if (lead != 0) {
      // b is monic
      size_t shift = a.size() - 1 - db;
      for (size_t i = 0; i <= db; ++i) {
        unsigned t = (lead * b[i]) % p;
        a[shift + i] = (a[shift + i] + p - t) % p;
      }
    }
    a.pop_back();
  }
}

bool divides(unsigned d_packed, const std::vector<unsigned>& f, unsigned p) {
  std::vector<unsigned> d = unpack(d_packed, p);
  std::vector<unsigned> r = f;
  poly_mod(r, d, p);
  for (unsigned c : r)
    if (c) return false;
  return true;
}

// Exhaustive trial division by every monic polynomial of degree 1..m/2.
bool is_irreducible(const std::vector<unsigned>& f, unsigned p, unsigned m) {
  if (m == 1) return true;
  for (unsigned d = 1; 2 * d <= m; ++d) {
    unsigned lo = 1, hi = 1;
    for (unsigned i = 0; i < d; ++i) lo *= p;
    hi = lo * p;
    for (unsigned packed = lo; packed < hi; ++packed) {
      // force monic
      std::vector<unsigned> dv = unpack(packed, p);
      if (dv.back() != 1) continue;
      if (divides(packed, f, p)) return false;
    }
  }
  return true;
}

}  // namespace

FieldSpec::FieldSpec(unsigned p, unsigned m) : p_(p), m_(m) {
  if (!is_prime(p)) throw Error("make_field: p is not prime");
  if (m < 1) throw Error("make_field: degree must be >= 1");
  unsigned long long q = 1;
  for (unsigned i = 0; i < m; ++i) {
    q *= p;
    if (q > kMaxQ) throw Error("make_field: p^m exceeds 2^16 cap");
  }
  q_ = static_cast<unsigned>(q);

  // Canonical modulus: smallest packed encoding among monic irreducibles.
  modulus_.clear();
  for (unsigned packed = q_; packed < 2 * q_; ++packed) {
    std::vector<unsigned> dense = unpack(packed, p);
    if (dense.size() != m + 1 || dense.back() != 1) continue;
    if (is_irreducible(dense, p, m)) {
      modulus_ = dense;
      break;
    }
  }
  if (modulus_.empty()) throw Error("make_field: no irreducible modulus found");

  if (q_ > 2) {
    // log/antilog tables from a primitive element.
    log_.assign(q_, 0);
    exp_.assign(2 * (q_ - 1), 0);
    for (unsigned g = 1; g < q_; ++g) {
      unsigned x = 1, order = 0;
      do {
        x = mul_slow(x, g);
        ++order;
      } while (x != 1);
      if (order == q_ - 1) {
        x = 1;
        for (unsigned k = 0; k < q_ - 1; ++k) {
          exp_[k] = x;
          log_[x] = k;
          x = mul_slow(x, g);
        }
        for (unsigned k = 0; k < q_ - 1; ++k) exp_[q_ - 1 + k] = exp_[k];
        break;
      }
    }
    if (exp_.empty() || exp_[0] != 1) throw Error("make_field: no primitive element");
  }
}

unsigned FieldSpec::mul_slow(unsigned a, unsigned b) const {
  if (a == 0 || b == 0) return 0;
  std::vector<unsigned> av = unpack(a, p_), bv = unpack(b, p_);
  std::vector<unsigned> prod(av.size() + bv.size() - 1, 0);
  for (size_t i = 0; i < av.size(); ++i)
    for (size_t j = 0; j < bv.size(); ++j)
      prod[i + j] = (prod[i + j] + av[i] * bv[j]) % p_;
  poly_mod(prod, modulus_, p_);
  unsigned v = 0, scale = 1;
  for (size_t i = 0; i < prod.size(); ++i) {
    v += prod[i] * scale;
    scale *= p_;
  }
  return v;
}

unsigned FieldSpec::add(unsigned a, unsigned b) const {
  if (p_ == 2) return a ^ b;
  unsigned v = 0, scale = 1;
  while (a || b) {
    v += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return v;
}

unsigned FieldSpec::neg(unsigned a) const {
  if (p_ == 2) return a;
  unsigned v = 0, scale = 1;
  while (a) {
    v += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return v;
}

unsigned FieldSpec::sub(unsigned a, unsigned b) const { return add(a, neg(b)); }

unsigned FieldSpec::mul(unsigned a, unsigned b) const {
  if (a == 0 || b == 0) return 0;
  if (q_ == 2) return 1;
  return exp_[log_[a] + log_[b]];
}

unsigned FieldSpec::inv(unsigned a) const {
  if (a == 0) throw Error("inversion of zero field element");
  if (q_ == 2) return 1;
  return exp_[q_ - 1 - log_[a]];
}

unsigned FieldSpec::pow(unsigned a, unsigned long long e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  if (q_ == 2) return 1;
  unsigned long long k = (static_cast<unsigned long long>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
  return exp_[k];
}

std::vector<unsigned> FieldSpec::coeffs(unsigned a) const {
  std::vector<unsigned> c(m_, 0);
  for (unsigned i = 0; i < m_; ++i) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

unsigned FieldSpec::from_coeffs(const std::vector<unsigned>& c) const {
  if (c.size() > m_) throw Error("coefficient vector longer than field degree");
  unsigned v = 0, scale = 1;
  for (unsigned x : c) {
    if (x >= p_) throw Error("coefficient out of range for GF(p)");
    v += x * scale;
    scale *= p_;
  }
  return v;
}

std::string FieldSpec::to_string(unsigned a) const {
  std::string s = "[";
  auto c = coeffs(a);
  for (unsigned i = 0; i < m_; ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + "]";
}

std::shared_ptr<const FieldSpec> FieldSpec::get(unsigned p, unsigned m) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const FieldSpec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto spec = std::shared_ptr<const FieldSpec>(new FieldSpec(p, m));
  cache[key] = spec;
  return spec;
}

FieldElement embed_tower(const FieldElement& a, const FieldSpec* target) {
  const FieldSpec* src = a.spec();
  if (src == target) return a;
  if (src->p() != target->p() || target->m() % src->m() != 0)
    throw Error("embed_tower: no embedding (degree not divisible)");

  static std::mutex mu;
  static std::map<std::pair<const FieldSpec*, const FieldSpec*>, std::vector<unsigned>> cache;
  std::vector<unsigned>* map_ptr = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(src, target);
    auto it = cache.find(key);
    if (it == cache.end()) {
      // Find every root of the source modulus in the target, keep the one
      // with lexicographically smallest coefficient vector.
      const auto& mod = src->modulus();
      unsigned best = 0;
      bool found = false;
      for (unsigned r = 0; r < target->q(); ++r) {
        unsigned acc = 0;
        for (size_t i = mod.size(); i-- > 0;) {
          acc = target->mul(acc, r);
          acc = target->add(acc, mod[i] % target->p());
        }
        if (acc == 0) {
          if (!found || target->coeffs(r) < target->coeffs(best)) best = r;
          found = true;
        }
      }
      if (!found) throw Error("embed_tower: source modulus has no root in target");
      // Image of each source basis power x^i.
      std::vector<unsigned> img(src->m());
      unsigned rp = 1;
      for (unsigned i = 0; i < src->m(); ++i) {
        img[i] = rp;
        rp = target->mul(rp, best);
      }
      it = cache.emplace(key, std::move(img)).first;
    }
    map_ptr = &it->second;
  }

  auto c = a.coeffs();
  unsigned out = 0;
  for (unsigned i = 0; i < src->m(); ++i) {
    unsigned ci = c[i] % target->p();
    unsigned term = (*map_ptr)[i];
    // scalar multiple ci * x^i image, ci in prime field
    unsigned acc = 0;
    for (unsigned k = 0; k < ci; ++k) acc = target->add(acc, term);
    out = target->add(out, acc);
  }
  return FieldElement(target, out);
}

}  // namespace cubicml
