#pragma once

#include <optional>
#include <set>
#include <vector>

#include "cubicml/form.hpp"

namespace cubicml {

/// Point of P^3 over a finite field, normalized so the leftmost nonzero
/// coordinate is 1.  Canonical ordering is lexicographic on the
/// coordinate coefficient vectors.
class ProjPoint {
 public:
  explicit ProjPoint(std::array<FieldElement, 4> x);

  const FieldElement& operator[](int i) const { return x_[i]; }
  const std::array<FieldElement, 4>& coords() const { return x_; }
  const FieldSpec* spec() const { return x_[0].spec(); }

  bool operator==(const ProjPoint& o) const { return x_ == o.x_; }
  bool operator!=(const ProjPoint& o) const { return !(*this == o); }
  bool operator<(const ProjPoint& o) const;

  std::string to_string() const;

 private:
  std::array<FieldElement, 4> x_;
};

ProjPoint make_point(const std::shared_ptr<const FieldSpec>& spec, std::array<unsigned, 4> idx);

/// Line of P^3 as the row span of a rank-2 matrix held in reduced
/// row-echelon form; the RREF makes the representation unique per line.
class ProjLine {
 public:
  static ProjLine through(const ProjPoint& p, const ProjPoint& q);
  static std::optional<ProjLine> from_rows(std::array<FieldElement, 4> r0,
                                           std::array<FieldElement, 4> r1);

  const std::array<FieldElement, 4>& row0() const { return r0_; }
  const std::array<FieldElement, 4>& row1() const { return r1_; }
  const std::array<int, 2>& pivots() const { return piv_; }

  bool contains(const ProjPoint& p) const;
  ProjPoint at(const FieldElement& s, const FieldElement& t) const;
  std::vector<ProjPoint> points() const;  // the q+1 rational points

  /// Parameter (s:t) of a point known to lie on the line.
  std::array<FieldElement, 2> param_of(const ProjPoint& p) const;

  bool operator==(const ProjLine& o) const { return r0_ == o.r0_ && r1_ == o.r1_; }
  bool operator<(const ProjLine& o) const;

 private:
  ProjLine() = default;
  std::array<FieldElement, 4> r0_, r1_;
  std::array<int, 2> piv_;
};

std::vector<ProjPoint> enumerate_proj_points(const std::shared_ptr<const FieldSpec>& spec);

/// All lines of P^3(GF(q)), each exactly once in canonical RREF form;
/// count is (q^2+1)(q^2+q+1).  Cached per field.
const std::vector<ProjLine>& lines_in_p3(const std::shared_ptr<const FieldSpec>& spec);

/// Binary form of degree d in the pencil parameters (s:t):
/// coefficient k multiplies s^(d-k) t^k.
template <class R>
std::vector<R> restrict_to_pencil(const FormT<R>& f, const std::array<R, 4>& A,
                                  const std::array<R, 4>& B) {
  R zero = ring_traits<R>::zero_like(A[0]);
  std::vector<R> out(f.degree() + 1, zero);
  for (const auto& [e, c] : f.terms()) {
    std::vector<R> poly{c};  // polynomial in (s,t), degree grows as factors multiply in
    for (int i = 0; i < 4; ++i) {
      for (unsigned k = 0; k < e[i]; ++k) {
        std::vector<R> next(poly.size() + 1, zero);
        for (size_t d = 0; d < poly.size(); ++d) {
          next[d] = next[d] + poly[d] * A[i];
          next[d + 1] = next[d + 1] + poly[d] * B[i];
        }
        poly = std::move(next);
      }
    }
    for (size_t d = 0; d < poly.size(); ++d) out[d] = out[d] + poly[d];
  }
  return out;
}

/// Rational roots of a binary form over GF(q) with multiplicities,
/// found by scanning the q+1 parameters and deflating linear factors.
std::vector<std::pair<std::array<FieldElement, 2>, int>> binary_form_rational_roots(
    const std::vector<FieldElement>& coeffs, const std::shared_ptr<const FieldSpec>& spec);

enum class CycleTag { Transversal3Rational, Tangent, Triple, LineInSurface, PartialRational };

struct IntersectionCycle {
  std::vector<FieldElement> restriction;               // binary cubic coefficients
  std::vector<std::pair<ProjPoint, int>> rational_points;  // with multiplicities
  CycleTag tag;
};

/// Cubic surface over a finite field with cached rational points (split
/// into smooth and singular) and cached rational lines on the surface.
/// Immutable after construction.
class Surface {
 public:
  Surface(FieldForm f, std::shared_ptr<const FieldSpec> spec);

  const FieldForm& form() const { return f_; }
  const std::shared_ptr<const FieldSpec>& field() const { return spec_; }
  unsigned q() const { return spec_->q(); }

  /// Smooth rational points, canonically sorted.  The equivalence
  /// machinery operates on these; singular rational points (possible on
  /// reductions that are not themselves smooth) are kept separately.
  const std::vector<ProjPoint>& points() const { return smooth_points_; }
  const std::vector<ProjPoint>& all_rational_points() const { return all_points_; }
  const std::vector<ProjPoint>& singular_rational_points() const { return singular_points_; }
  const std::vector<ProjLine>& lines() const { return lines_; }

  bool contains(const ProjPoint& p) const;
  int point_index(const ProjPoint& p) const;  // index into points(), -1 if absent
  std::array<FieldElement, 4> gradient(const ProjPoint& p) const;
  bool has_line_through(const ProjPoint& p) const;

  std::array<FieldElement, 4> tangent_plane(const ProjPoint& p) const;
  IntersectionCycle intersect_line(const ProjLine& line) const;

  struct Collinear {
    enum Kind { Point, LineInSurface, TangentSection } kind;
    std::optional<ProjPoint> point;
  };
  Collinear collinear_third(const ProjPoint& p, const ProjPoint& q) const;

  struct TangentSection {
    std::vector<ProjPoint> points;
    bool rational_tangent_line_at_p;
  };
  TangentSection tangent_section_points(const ProjPoint& p) const;

  /// Local expansion at P restricted to the tangent plane: the section
  /// reads q2(t2,t3) + c3(t2,t3) in the plane coordinates spanned by u, v.
  struct LocalSection {
    std::array<FieldElement, 3> q2;  // t2^2, t2*t3, t3^2
    std::array<FieldElement, 4> c3;  // t2^3, t2^2 t3, t2 t3^2, t3^3
    std::array<FieldElement, 4> u, v;
  };
  LocalSection local_section(const ProjPoint& p) const;

  bool is_eckardt(const ProjPoint& p) const;
  /// Whether the tangent cone cubic at an Eckardt point is squarefree
  /// (has three distinct closure lines); reported, not folded into the
  /// Eckardt decision.
  bool eckardt_cone_squarefree(const ProjPoint& p) const;

  bool is_general_position(const ProjPoint& p, const ProjPoint& q) const;

  /// |B_P(F_q)|: rational points in the tangent-plane section or on the
  /// first polar quadric of P, counted by direct scan.
  unsigned bad_locus_count(const ProjPoint& p) const;

  struct SingularScan {
    unsigned requested_bound;
    unsigned effective_bound;  // capped so each extension stays enumerable
    std::vector<std::pair<unsigned, std::string>> found;  // (degree, point)
  };
  SingularScan singular_points_up_to(unsigned degree_bound) const;

  /// Non-singularity of P on the curve {Q in S : P0 lies on the tangent
  /// plane at Q}, decided by the mixed second partials criterion in an
  /// adapted coordinate frame.
  bool tangency_locus_check(const ProjPoint& p0, const ProjPoint& p) const;

 private:
  std::shared_ptr<const FieldSpec> spec_;
  FieldForm f_;
  std::array<FieldForm, 4> grad_;
  std::vector<ProjPoint> all_points_, smooth_points_, singular_points_;
  std::vector<ProjLine> lines_;
};

}  // namespace cubicml
