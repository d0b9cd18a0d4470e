#pragma once

#include <cstdint>
#include <iosfwd>

#include "cubicml/equivalence.hpp"

namespace cubicml {

/// One row of the exhaustive GF(2) sweep.  Forms are identified by a
/// 20-bit mask over the degree-3 monomials in ascending lexicographic
/// exponent order (bit t = t-th monomial present).
struct CensusRecord {
  uint32_t mask = 0;
  bool smooth = false;       // no singular closed point of degree <= bound
  unsigned n = 0;            // rational points over GF(2)
  unsigned line_count = 0;   // rational lines on the surface
  bool all_eckardt = false;  // line-free and every rational point Eckardt
  unsigned class_count = 0;  // universal equivalence classes
  bool exceptional = false;  // line-free, all-Eckardt, n >= 2
};

struct CensusSummary {
  unsigned bound = 0;           // singularity scan bound actually applied
  uint64_t total_forms = 0;     // nonzero coefficient masks
  uint64_t smooth_count = 0;
  uint64_t n_ge2_count = 0;     // smooth surfaces with n >= 2
  uint64_t exceptional_count = 0;
  uint64_t dichotomy_violations = 0;  // must end at zero
  std::vector<uint32_t> exceptional_masks;  // ascending
};

const std::array<Expo, 20>& census_monomials();
FieldForm form_of_mask(uint32_t mask);
uint32_t mask_of_form(const FieldForm& f);

/// Full sweep of the 2^20 - 1 nonzero forms.  Smoothness to the bound is
/// decided by a linear-algebra sieve over the covering extension fields;
/// each smooth surface is then analyzed with the regular library path.
/// When `records` is non-null it receives one record per nonzero mask in
/// ascending mask order, independent of the job count.
CensusSummary run_census(unsigned bound, unsigned jobs,
                         std::vector<CensusRecord>* records = nullptr);

/// Independent slow path for a single mask: singular points found by
/// direct gradient scans over each covering field, with the same
/// analysis layout.  Used to spot-check the sieve.
CensusRecord analyze_mask_slow(uint32_t mask, unsigned bound);

std::string census_tsv_header();
std::string census_tsv_row(const CensusRecord& r);

}  // namespace cubicml
