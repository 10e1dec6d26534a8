#pragma once

#include "qpc/collect.hpp"
#include "qpc/intmat.hpp"

namespace qpc {

struct Cardinal {
  bool finite = true;
  Int value = 1; // valid when finite
  bool operator==(const Cardinal &o) const {
    return finite == o.finite && (!finite || value == o.value);
  }
};

// Isomorphism-invariant summary of a consistent presentation.
struct StructureDescription {
  Cardinal order;
  int hirsch = 0;
  std::vector<Int> abelianization; // invariant factors, 0 = free
  bool abelian = false;
  std::string display;
};

Cardinal order(const PcPresentation &pres);
int hirsch_length(const PcPresentation &pres);
std::vector<Int> abelianization(const PcPresentation &pres);
bool is_abelian(const PcPresentation &pres);

// Invariant factors rendered as "C6", "C2 x C2 x Z", "1".
std::string invariant_string(const std::vector<Int> &invariants);

StructureDescription describe(const PcPresentation &pres);

// Both presentations must be abelian; true iff the invariant factors agree.
bool is_isomorphic_abelian(const PcPresentation &p1, const PcPresentation &p2);

enum class MatchVerdict { Yes, No, Unknown };

// Certified isomorphism test: searches generator images of p2 in p1
// satisfying p2's relators and generating p1 (and, for infinite groups, an
// epimorphism back). The search is bounded; Unknown means budget exhausted.
MatchVerdict matches_presentation(const PcPresentation &p1, const PcPresentation &p2,
                                  long budget = 2'000'000);

} // namespace qpc
