#pragma once

#include "qpc/presentation.hpp"

#include <map>

namespace qpc {

// Collection from the left: rewrites arbitrary words over a pc presentation
// to their normal form. Works on inconsistent presentations too (the result
// is then merely a deterministic function of the input word, which is what
// consistency enforcement needs).
//
// A Collector memoizes derived inverse-conjugation words and conjugation
// automorphism orders for one presentation. Construction is cheap; for
// concurrent use give each thread its own instance.
class Collector {
public:
  explicit Collector(const PcPresentation &p, long step_budget = kDefaultBudget);

  const PcPresentation &presentation() const { return P; }

  ExponentVector collect(const Word &w) const;
  ExponentVector evaluate(const ExprPtr &e) const;

  ExponentVector mul(const ExponentVector &a, const ExponentVector &b) const;
  ExponentVector mul(const ExponentVector &a, const Word &w) const;
  ExponentVector power(const ExponentVector &a, const Int &k) const;
  ExponentVector inverse(const ExponentVector &a) const;
  // y^{-1} x y
  ExponentVector conjugate(const ExponentVector &x, const ExponentVector &y) const;
  // x^{-1} y^{-1} x y
  ExponentVector commutator(const ExponentVector &x, const ExponentVector &y) const;

  Word to_word(const ExponentVector &v) const;

  // Index of the first nonzero entry (1-based), or 0 for the identity.
  static int depth(const ExponentVector &v);

  // The word for g_i^{g_j^{s}} with s = +-1; derives the inverse direction on
  // demand when the presentation does not store it.
  Word conjugate_of_generator(int i, int j, int sign) const;

  long steps_used() const { return steps_; }

  static constexpr long kDefaultBudget = 200'000'000L;

private:
  struct Item {
    Word w;
    Int rep; // w^rep
  };

  void run(ExponentVector &a, std::vector<Item> &stack) const;
  void mul_gen_pow(ExponentVector &a, int j, Int e, std::vector<Item> &stack) const;
  Word conjugate_tail_word(const Word &t, int j, const Int &e) const;
  Word conjugate_word_once(const Word &t, int j, int sign) const;
  // Order of the conjugation automorphism by g_j on <g_{j+1},...,g_n>, probed
  // up to a small bound; 0 when unknown.
  int automorphism_order(int j) const;
  void bump() const;

  const PcPresentation &P;
  long budget_;
  mutable long steps_ = 0;
  mutable std::map<std::pair<int, int>, Word> cinv_memo_;
  mutable std::map<int, int> aut_order_memo_;
  std::vector<bool> conj_trivial_above_; // all g_k^{g_j} trivial for k > j
};

// Full Sims overlap list: associativity overlaps g_k(g_j g_i) = (g_k g_j)g_i
// for k > j > i, power overlaps, and inverse overlaps g_j = (g_j g_i^{-1})g_i
// for i outside the power index set.
ConsistencyReport consistency_report(const PcPresentation &p,
                                     long step_budget = Collector::kDefaultBudget);

// Eliminates generators with e_i = 1 by substituting their right-hand side;
// such generators only ever arise transiently. index_map[i-1] is the new
// 1-based index of old generator i, or 0 if it was eliminated.
PcPresentation eliminate_trivial_generators(const PcPresentation &p,
                                            std::vector<int> *index_map = nullptr);

// Re-collects every stored right-hand side so emitted presentations are in
// normal form. Requires a presentation on which collection terminates.
PcPresentation canonicalize_rhs(const PcPresentation &p);

} // namespace qpc
