#pragma once

#include <string>
#include <vector>

#include "cubicml/geometry.hpp"

namespace cubicml {

/// Union-find partition of {0..n-1} with stable class labels (smallest
/// member index).
class Partition {
 public:
  explicit Partition(size_t n);
  static Partition singletons(size_t n) { return Partition(n); }
  static Partition one_class(size_t n);

  size_t size() const { return parent_.size(); }
  int find(int i) const;
  bool merge(int a, int b);  // true iff the classes were distinct
  size_t class_count() const;

  /// Label of i's class: the smallest member index.
  int label(int i) const;
  std::vector<int> labels() const;  // distinct labels, ascending
  std::vector<std::vector<int>> classes() const;  // grouped, members ascending

  bool same(int a, int b) const { return find(a) == find(b); }
  bool operator==(const Partition& o) const;
  bool operator!=(const Partition& o) const { return !(*this == o); }

  /// Every class of *this is contained in a class of o.
  bool refines(const Partition& o) const;

 private:
  mutable std::vector<int> parent_;
  std::vector<int> rank_;
};

Partition intersect_partitions(const Partition& a, const Partition& b);

/// Collinearity triple on smooth-point indices: the pair (a, b) composes
/// to c.  Pairs are stored with a <= b; degenerate pairs a == b carry the
/// tangent-section outcomes.
struct Triple {
  int a, b, c;
};

/// All composition triples of the surface: transversal/tangent thirds for
/// distinct pairs not joined by a line on S, and the tangent-section
/// outcomes for each point against itself.  Outcomes falling on singular
/// points are dropped (the equivalence lives on the smooth locus).
std::vector<Triple> collinearity_triples(const Surface& s);

/// Seed partition every admissible equivalence must refine to: each
/// rational line on S is one class, and for each P the tangent-section
/// outcomes of (P, P) form one class.
Partition forced_merges(const Surface& s);

/// Least fixpoint above `start` under the rule: equal class pairs must
/// compose into equal classes.
Partition close_admissible(const Surface& s, Partition start);

Partition universal_equivalence(const Surface& s);

/// Finest admissible partition additionally satisfying the power
/// property: i = 3 forces X composed with itself back into X; i = 2
/// forces all self-compositions into one common class.
Partition property_equivalence(const Surface& s, int i);

/// n x n composition tables on the classes of an admissible partition.
struct CMLTable {
  int n = 0;
  int base = 0;                        // index of [O]
  std::vector<int> class_labels;       // smallest-member labels, ascending
  std::vector<std::vector<int>> raw;   // S1 o S2 (collinearity composition)
  std::vector<std::vector<int>> prod;  // S1 * S2 = [O] o (S1 o S2)
};

/// Class of c1 o c2; scans every representative pair and errors on
/// disagreement (which certifies the partition was not admissible).
int class_compose(const Surface& s, const Partition& a, int c1, int c2);

CMLTable build_cml(const Surface& s, const Partition& a, int base);

struct CMLReport {
  bool identity = false;
  bool latin = false;
  bool commutative = false;
  bool moufang = false;
  bool orders_divide_6 = false;
  bool splits_exp2_exp3 = false;
  bool associative = false;  // informational; not an axiom
  std::vector<int> orders;   // per element
  std::vector<std::string> failures;
  bool all_pass() const {
    return identity && latin && commutative && moufang && orders_divide_6 && splits_exp2_exp3;
  }
};

CMLReport verify_cml_axioms(const CMLTable& t);

/// True iff the loop tables over all base-class choices are pairwise
/// isomorphic (backtracking bijection search; class count capped at 9).
bool base_independence_check(const Surface& s, const Partition& a);

}  // namespace cubicml
