#pragma once

#include "qpc/subgrp.hpp"

#include <set>

namespace qpc {

// Identifies one defining relator of a pc presentation. Enumeration order is
// fixed: for each generator i ascending, first the conjugation relations
// g_i^{g_j} (j ascending), then the inverse conjugations, then the power
// relation g_i^{e_i}.
struct RelatorRef {
  enum class Kind { Power, Conj, ConjInv };
  Kind kind;
  int i = 0, j = 0;
  std::string describe(const PcPresentation &p) const;
};

std::vector<RelatorRef> enumerate_relators(const PcPresentation &p);

// The base presentation with one new central generator per non-skipped
// relator r, rewritten as r = t, and t^q = 1 when q >= 1.
struct TailedPresentation {
  PcPresentation base;
  PcPresentation pres;
  Int q;
  int n_base = 0;
  std::vector<RelatorRef> relators;
  std::vector<int> tail_of_relator; // 1-based tail generator index, 0 = skipped
};

TailedPresentation attach_tails(const PcPresentation &pres, const Int &q,
                                const std::set<int> &skip_relators = {});

// Consistent q-central extension with its projection, canonical lift and the
// surviving central tail block.
struct ConsistentCover {
  PcPresentation E;
  PcPresentation base;
  Int q;
  int n_base = 0;
  std::vector<Int> tail_orders; // surviving tails, 0 = infinite
  // Row a = expression of the a-th attached tail over the surviving tails.
  IntMatrix transform;

  int n_tails() const { return static_cast<int>(tail_orders.size()); }
  int first_tail_index() const { return n_base + 1; }

  ExponentVector pi(const ExponentVector &x) const;   // drop tails
  ExponentVector lift(const ExponentVector &x) const; // pad with zero tails
  bool in_tail_subgroup(const ExponentVector &x) const;

  // |E| when finite (0 = infinite): |base| * prod tail orders.
  Int order() const;
};

// Collects every consistency discrepancy over the tails, stacks q-identity
// rows, runs a Smith normal form and rewrites the tails through the
// unimodular transform. The base quotient is untouched.
ConsistentCover enforce_consistency(const TailedPresentation &tp);

// Evaluate a word expression whose atoms index the supplied cover elements
// (1-based); the value must lie in the tail subgroup and is returned as the
// exponent vector over the surviving tails.
std::vector<Int> evaluate_in_cover(const ConsistentCover &cov, const ExprPtr &expr,
                                   const std::vector<ExponentVector> &symbols);

// Consistent presentation of ambient / <subgrp_gens> for central subgroup
// generators inside the tail block.
PcPresentation central_quotient(const ConsistentCover &cov,
                                const std::vector<ExponentVector> &subgrp_gens,
                                const InducedSequence &ambient);

} // namespace qpc
