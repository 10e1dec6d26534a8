#include "qpc/qwedge.hpp"

namespace qpc {

WedgeContext::WedgeContext(PcPresentation g, Int q)
    : G_(std::move(g)), q_(std::move(q)),
      cover_(enforce_consistency(attach_tails(G_, q_))) {
  Collector c(cover_.E);
  const int n = G_.n();
  std::vector<ExponentVector> gens;
  // Generators of E'E^q: commutators of generator lifts, then q-th powers.
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      gens.push_back(c.commutator(c.collect(word_of_gen(i)), c.collect(word_of_gen(j))));
  if (q_ >= 1)
    for (int k = 1; k <= n; ++k)
      gens.push_back(c.power(c.collect(word_of_gen(k)), q_));
  // The subgroup is verbal, hence normal; close under conjugation by the
  // cover generators.
  IgsOptions opts;
  for (int i = 1; i <= cover_.E.n(); ++i)
    opts.normal_closure_by.push_back(c.collect(word_of_gen(i)));
  W_ = induced_sequence(cover_.E, gens, opts);
  wedge_pres_ = subgroup_presentation(W_);
  for (int k = 1; k <= wedge_pres_.n(); ++k) {
    wedge_pres_.set_name(k, "w" + std::to_string(k));
    const auto &m = W_.members()[k - 1];
    wedge_pres_.set_provenance(
        k, "wedge member at cover depth " + std::to_string(m.depth));
  }
  wedge_pres_.set_group_name("wedge_" + q_.get_str() + "(" + G_.group_name() + ")");
}

ExponentVector WedgeContext::lift_word(const Word &w) const {
  // Normalize in G first so the lift is the canonical section of the normal
  // form, then evaluate that word in the cover.
  Collector cg(G_);
  ExponentVector nf = cg.collect(w);
  Collector ce(cover_.E);
  return ce.collect(ce.to_word(cover_.lift(nf)));
}

std::vector<Int> WedgeContext::lambda(const Word &g, const Word &h,
                                      const Word &k) const {
  if (q_ == 0 && !free_reduce(k).empty())
    throw InvalidArgument("lambda: the k-component must be empty when q = 0");
  Collector cg(G_);
  std::vector<ExponentVector> key{cg.collect(g), cg.collect(h), cg.collect(k)};
  auto it = lambda_cache_.find(key);
  if (it != lambda_cache_.end()) return it->second;
  Collector ce(cover_.E);
  ExponentVector val = ce.mul(
      ce.commutator(lift_word(g), lift_word(h)), ce.power(lift_word(k), q_));
  auto coords = W_.express(val);
  if (!coords)
    throw InternalError("lambda value escaped the wedge subgroup");
  lambda_cache_[key] = *coords;
  return *coords;
}

std::vector<Int> WedgeContext::action(const std::vector<Int> &coords,
                                      const Word &x) const {
  Collector ce(cover_.E);
  ExponentVector conj = ce.conjugate(embed(coords), lift_word(x));
  auto res = W_.express(conj);
  if (!res) throw InternalError("wedge action left the wedge subgroup");
  return *res;
}

ExponentVector WedgeContext::embed(const std::vector<Int> &coords) const {
  return W_.element(coords);
}

std::vector<Int> WedgeContext::express(const ExponentVector &cover_elt) const {
  auto res = W_.express(cover_elt);
  if (!res) throw InvalidArgument("element is not in the wedge subgroup");
  return *res;
}

Word WedgeContext::coords_to_word(const std::vector<Int> &coords,
                                  int index_shift) const {
  Word w;
  for (size_t k = 0; k < coords.size(); ++k)
    if (coords[k] != 0)
      w.emplace_back(static_cast<int>(k) + 1 + index_shift, coords[k]);
  return w;
}

WedgeContext build_wedge(const PcPresentation &g, const Int &q) {
  if (q < 0) throw InvalidArgument("q must be >= 0");
  ConsistencyReport rep = consistency_report(g);
  if (!rep.consistent())
    throw InconsistentPresentation("input presentation is not consistent");
  return WedgeContext(g, q);
}

PcPresentation h2(const WedgeContext &ctx) {
  InducedSequence t =
      tail_intersection(ctx.wedge_sequence(), ctx.cover().first_tail_index());
  PcPresentation p = subgroup_presentation(t);
  p.set_group_name("H2_" + ctx.q().get_str() + "(" + ctx.group().group_name() + ")");
  return p;
}

InducedSequence exterior_center(const PcPresentation &g, const Int &q) {
  ConsistentCover cov = enforce_consistency(attach_tails(g, q));
  InducedSequence z = center(cov.E);
  std::vector<ExponentVector> images;
  for (const auto &m : z.members()) {
    ExponentVector img = cov.pi(m.nf);
    if (Collector::depth(img) != 0) images.push_back(img);
  }
  return induced_sequence(g, images);
}

bool is_q_capable(const PcPresentation &g, const Int &q) {
  return exterior_center(g, q).trivial();
}

} // namespace qpc
