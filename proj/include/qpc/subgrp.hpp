#pragma once

#include "qpc/collect.hpp"
#include "qpc/intmat.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace qpc {

// Canonical generating sequence of a subgroup of a polycyclic group: member
// depths strictly increase, leading exponents are positive and minimal, and
// entries above the diagonal are reduced. Supports membership testing and
// coordinate expression by sifting.
struct IgsMember {
  ExponentVector nf;
  int depth = 0;
  Int leading;
  // Definition over the original input generators (atoms are 1-based indices
  // into the gens list handed to induced_sequence); null unless word tracking
  // was requested.
  ExprPtr definition;
};

class InducedSequence {
public:
  InducedSequence() = default;
  // Snapshots the parent so the sequence stays valid independently of the
  // presentation object it was built from.
  InducedSequence(const PcPresentation &parent, std::vector<IgsMember> members)
      : parent_(std::make_shared<const PcPresentation>(parent)),
        members_(std::move(members)) {}
  InducedSequence(std::shared_ptr<const PcPresentation> parent,
                  std::vector<IgsMember> members)
      : parent_(std::move(parent)), members_(std::move(members)) {}

  const PcPresentation &parent() const { return *parent_; }
  const std::shared_ptr<const PcPresentation> &parent_ptr() const { return parent_; }
  const std::vector<IgsMember> &members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool trivial() const { return members_.empty(); }

  // Coordinates c with prod members^c = x, or nullopt for non-members.
  std::optional<std::vector<Int>> express(const ExponentVector &x) const;
  bool contains(const ExponentVector &x) const { return express(x).has_value(); }

  // Realize coordinates as a parent element.
  ExponentVector element(const std::vector<Int> &coords) const;

  // Subgroup order; 0 denotes infinite.
  Int order() const;

  // True when the subgroup is the whole parent group.
  bool is_whole_group() const;

private:
  std::shared_ptr<const PcPresentation> parent_;
  std::vector<IgsMember> members_;
};

struct IgsOptions {
  // Also close the sequence under conjugation by these parent elements (and
  // their inverses): yields the normal closure under the group they generate
  // together with the subgroup. Used for verbal subgroups.
  std::vector<ExponentVector> normal_closure_by;
  bool track_words = false;
  long step_budget = Collector::kDefaultBudget;
};

InducedSequence induced_sequence(const PcPresentation &parent,
                                 const std::vector<ExponentVector> &gens,
                                 const IgsOptions &opts = {});

// Evaluate a member definition, substituting symbol k by symbols[k-1].
ExponentVector evaluate_symbol_expr(const ExprPtr &e,
                                    const std::vector<ExponentVector> &symbols,
                                    const Collector &c);

// Consistent presentation on one generator per member; the embedding sends
// generator k to member k (available from the sequence itself).
PcPresentation subgroup_presentation(const InducedSequence &seq);

// Members at depth >= first_tail_depth; generates subgroup ∩ T for the
// central tail block of a cover.
InducedSequence tail_intersection(const InducedSequence &seq, int first_tail_depth);

// Center of a consistent polycyclic group. Strategies, in order: whole group
// when abelian; congruence solving over a maximal abelian normal suffix with
// finite quotient; element filtering for small finite groups. Throws
// UnsupportedInstance when none applies.
InducedSequence center(const PcPresentation &pres);

// Presentation of ambient / <zgens> for a central subgroup given by elements
// of the ambient subgroup. image_of maps an ambient element (in parent
// coordinates) to its image in the quotient presentation; source_index[k-1]
// is the ambient member realizing quotient generator k.
struct CentralQuotient {
  PcPresentation pres;
  std::vector<int> source_index;
  std::function<ExponentVector(const ExponentVector &)> image_of;
};
CentralQuotient quotient_by_central(const InducedSequence &ambient,
                                    const std::vector<ExponentVector> &zgens);

} // namespace qpc
