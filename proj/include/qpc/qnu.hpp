#pragma once

#include "qpc/qwedge.hpp"

#include <memory>

namespace qpc {

// tau^q(G) on generators g_1..g_n, g_1^phi..g_n^phi, w_1..w_r with the five
// relator families: copies of G, the phi copy, the wedge relators, the mixed
// conjugations through lambda, and the action of G and G^phi on the wedge.
struct TauPresentation {
  PcPresentation pres;
  std::shared_ptr<WedgeContext> wedge;
  int n = 0; // generators of G; phi block at n+1..2n, w block at 2n+1..2n+r
  int r = 0;

  int g_index(int i) const { return i; }
  int phi_index(int i) const { return n + i; }
  int w_index(int k) const { return 2 * n + k; }
};

// Family (1..5) of a relator of the tau presentation, read off the indices.
int tau_relator_family(const TauPresentation &tau, const RelatorRef &ref);

TauPresentation build_tau(const PcPresentation &g, const Int &q);

// The defining relator instances of nu^q(G) over the polycyclic generators,
// as expressions over the symbols g_1..g_n (1..n), g^phi (n+1..2n) and
// hat(g) (2n+1..3n). Hats of composite words are expanded through the
// product law; for q = 0 the hat families are empty.
struct NuRelatorInstances {
  std::vector<ExprPtr> exprs;
  std::vector<std::pair<std::string, int>> counts; // per family, in order
  int total() const {
    int t = 0;
    for (auto &[k, v] : counts) t += v;
    return t;
  }
};
NuRelatorInstances nu_relator_instances(const PcPresentation &g, const Int &q);

// Expansion of hat(x) for an arbitrary element of G into an expression over
// the symbols g (1..n), g^phi (n+1..2n) and hat(g_i) (2n+1..3n).
ExprPtr hat_expansion(const PcPresentation &g, const Int &q, const ExponentVector &x);

struct NuContext {
  PcPresentation pres; // nu^q(G)
  std::shared_ptr<TauPresentation> tau;
  PcPresentation group; // G
  Int q;
  int n = 0;
  bool via_shortcut = false;

  std::vector<ExponentVector> img_g, img_phi, img_hat; // in pres coordinates
  InducedSequence upsilon;                             // [G,G^phi]Ghat <= pres
  PcPresentation tensor_pres;
  InducedSequence delta;
  PcPresentation delta_pres;
  // Generator maps: psi into tau.pres, rho into G.
  std::vector<ExponentVector> psi_gen;
  std::vector<ExponentVector> rho_gen;

  ExponentVector psi(const ExponentVector &x) const;
};

NuContext build_nu(const PcPresentation &g, const Int &q);

// Shortcut for q-perfect G: the tau presentation is already nu^q(G).
NuContext build_nu_qperfect(const PcPresentation &g, const Int &q);

// G' G^q as a subgroup of G.
InducedSequence derived_power_subgroup(const PcPresentation &g, const Int &q);
bool is_q_perfect(const PcPresentation &g, const Int &q);

PcPresentation tensor_square(const NuContext &nu);
PcPresentation diagonal(const NuContext &nu);

// Image in G of an element of Upsilon under g⊗h -> [g,h], hat(k) -> k^q.
ExponentVector rho(const NuContext &nu, const ExponentVector &x);

} // namespace qpc
