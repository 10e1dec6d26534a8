#pragma once

#include "qpc/covers.hpp"

#include <map>

namespace qpc {

// The wedge subgroup W = E' E^q of the cover, with its presentation, the
// correspondence onto wedge coordinates and the induced G-action.
class WedgeContext {
public:
  WedgeContext(PcPresentation g, Int q);

  const PcPresentation &group() const { return G_; }
  const Int &q() const { return q_; }
  const ConsistentCover &cover() const { return cover_; }
  const InducedSequence &wedge_sequence() const { return W_; }
  const PcPresentation &wedge_presentation() const { return wedge_pres_; }

  // Canonical lift of a word over G's generators into the cover.
  ExponentVector lift_word(const Word &w) const;

  // Coordinates of [g~, h~] (k~)^q over the wedge generators.
  std::vector<Int> lambda(const Word &g, const Word &h, const Word &k) const;

  // Conjugate a wedge element by the lift of x and re-express it.
  std::vector<Int> action(const std::vector<Int> &coords, const Word &x) const;

  ExponentVector embed(const std::vector<Int> &coords) const;
  std::vector<Int> express(const ExponentVector &cover_elt) const;

  Word coords_to_word(const std::vector<Int> &coords, int index_shift = 0) const;

private:
  PcPresentation G_;
  Int q_;
  ConsistentCover cover_;
  InducedSequence W_;
  PcPresentation wedge_pres_;
  mutable std::map<std::vector<ExponentVector>, std::vector<Int>> lambda_cache_;
};

WedgeContext build_wedge(const PcPresentation &g, const Int &q);

// Presentation of W ∩ T_q, the second homology group with Z_q coefficients.
PcPresentation h2(const WedgeContext &ctx);

// pi-image of the center of the cover, as a subgroup of G.
InducedSequence exterior_center(const PcPresentation &g, const Int &q);

bool is_q_capable(const PcPresentation &g, const Int &q);

} // namespace qpc
