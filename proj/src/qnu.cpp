#include "qpc/qnu.hpp"

#include "qpc/structure.hpp"

#include <algorithm>

namespace qpc {

int tau_relator_family(const TauPresentation &tau, const RelatorRef &ref) {
  const int n = tau.n;
  if (ref.i <= n) return 1;
  if (ref.i <= 2 * n) {
    if (ref.kind != RelatorRef::Kind::Power && ref.j <= n) return 4;
    return 2;
  }
  if (ref.kind != RelatorRef::Kind::Power && ref.j <= 2 * n) return 5;
  return 3;
}

TauPresentation build_tau(const PcPresentation &g, const Int &q) {
  TauPresentation tau;
  tau.wedge = std::make_shared<WedgeContext>(build_wedge(g, q));
  const WedgeContext &wc = *tau.wedge;
  const PcPresentation &wp = wc.wedge_presentation();
  const int n = g.n();
  const int r = wp.n();
  tau.n = n;
  tau.r = r;

  PcPresentation p(2 * n + r);
  p.set_group_name("tau_" + q.get_str() + "(" + g.group_name() + ")");
  for (int i = 1; i <= n; ++i) {
    p.set_name(i, g.name(i));
    p.set_provenance(i, "generator of G");
    p.set_name(n + i, g.name(i) + "f");
    p.set_provenance(n + i, "phi copy of " + g.name(i));
  }
  for (int k = 1; k <= r; ++k) {
    p.set_name(2 * n + k, wp.name(k));
    p.set_provenance(2 * n + k, wp.provenance(k));
  }

  auto shift = [](const Word &w, int by) {
    Word out = w;
    for (Letter &l : out) l.gen += by;
    return out;
  };

  // (1) relations of G and (2) their phi copies.
  for (int i = 1; i <= n; ++i) {
    if (g.has_power(i)) {
      p.set_power(i, g.exponent(i), g.power_rhs(i));
      p.set_power(n + i, g.exponent(i), shift(g.power_rhs(i), n));
    }
    for (int j = 1; j < i; ++j) {
      if (g.has_conj(i, j)) {
        p.set_conj(i, j, g.conj(i, j));
        p.set_conj(n + i, n + j, shift(g.conj(i, j), n));
      }
      if (auto ci = g.conj_inv(i, j)) {
        p.set_conj_inv(i, j, *ci);
        p.set_conj_inv(n + i, n + j, shift(*ci, n));
      }
    }
  }
  // (3) the wedge relators.
  for (int k = 1; k <= r; ++k) {
    if (wp.has_power(k))
      p.set_power(2 * n + k, wp.exponent(k), shift(wp.power_rhs(k), 2 * n));
    for (int j = 1; j < k; ++j) {
      if (wp.has_conj(k, j))
        p.set_conj(2 * n + k, 2 * n + j, shift(wp.conj(k, j), 2 * n));
      if (auto ci = wp.conj_inv(k, j))
        p.set_conj_inv(2 * n + k, 2 * n + j, shift(*ci, 2 * n));
    }
  }
  // (4) mixed conjugations g_j^phi ^ g_i = g_j^phi (g_i, g_j, 1)lambda^{-1}.
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      std::vector<Int> lam = wc.lambda(word_of_gen(i), word_of_gen(j), Word());
      Word rhs = word_of_gen(n + j);
      Word lamw = wc.coords_to_word(lam, 2 * n);
      Word inv = word_inverse(lamw);
      rhs.insert(rhs.end(), inv.begin(), inv.end());
      p.set_conj(n + j, i, free_reduce(rhs));
      if (!g.has_power(i)) {
        std::vector<Int> lam2 = wc.lambda(word_of_gen(i, -1), word_of_gen(j), Word());
        Word rhs2 = word_of_gen(n + j);
        Word inv2 = word_inverse(wc.coords_to_word(lam2, 2 * n));
        rhs2.insert(rhs2.end(), inv2.begin(), inv2.end());
        p.set_conj_inv(n + j, i, free_reduce(rhs2));
      }
    }
  }
  // (5) the action of G and G^phi on the wedge.
  for (int k = 1; k <= r; ++k) {
    std::vector<Int> unit(r, Int(0));
    unit[k - 1] = 1;
    for (int i = 1; i <= n; ++i) {
      Word rhs = wc.coords_to_word(wc.action(unit, word_of_gen(i)), 2 * n);
      p.set_conj(2 * n + k, i, rhs);
      p.set_conj(2 * n + k, n + i, rhs);
      if (!g.has_power(i)) {
        Word rhs2 = wc.coords_to_word(wc.action(unit, word_of_gen(i, -1)), 2 * n);
        p.set_conj_inv(2 * n + k, i, rhs2);
        p.set_conj_inv(2 * n + k, n + i, rhs2);
      }
    }
  }

  p = canonicalize_rhs(p);
  ConsistencyReport rep = consistency_report(p);
  if (!rep.consistent())
    throw InternalError("tau presentation failed its consistency check");
  tau.pres = std::move(p);
  return tau;
}

// ---------------------------------------------------------------------------
// Relator instances of nu^q(G).

namespace {

// Builds hat(x) for arbitrary normal forms by peeling one generator at a time
// through the product law; hats of generators are the symbols 2n+i.
struct HatExpander {
  const PcPresentation &G;
  Collector cg;
  Int q;
  int n;
  std::map<ExponentVector, ExprPtr> memo;

  HatExpander(const PcPresentation &g, Int q_) : G(g), cg(g), q(std::move(q_)), n(g.n()) {}

  ExprPtr g_atom(const ExponentVector &nf) { return Expr::make_atom(cg.to_word(nf)); }
  ExprPtr phi_atom(const ExponentVector &nf) {
    Word w = cg.to_word(nf);
    for (Letter &l : w) l.gen += n;
    return Expr::make_atom(w);
  }
  ExprPtr hat_sym(int i) { return Expr::make_gen(2 * n + i); }

  // prod_{i=1}^{q-1} [u, (v^{-i})^phi]^{u^{q-1-i}}
  ExprPtr pairing(const ExponentVector &u, const ExponentVector &v) {
    std::vector<ExprPtr> parts;
    for (Int i = 1; i < q; ++i) {
      ExponentVector vmi = cg.power(v, -i);
      ExponentVector upw = cg.power(u, q - 1 - i);
      parts.push_back(Expr::make_conj(
          Expr::make_comm(g_atom(u), phi_atom(vmi)), g_atom(upw)));
    }
    if (parts.empty()) return Expr::make_atom(Word());
    return Expr::make_prod(std::move(parts));
  }

  ExprPtr hat(const ExponentVector &nf) {
    if (Collector::depth(nf) == 0) return Expr::make_atom(Word());
    auto it = memo.find(nf);
    if (it != memo.end()) return it->second;
    int d = Collector::depth(nf);
    int step = nf[d - 1] > 0 ? 1 : -1;
    ExponentVector u = cg.collect(word_of_gen(d, step));
    ExponentVector v = cg.mul(cg.power(u, Int(-1)), nf);
    ExprPtr hu;
    if (step > 0) {
      hu = hat_sym(d);
    } else {
      // hat(g^{-1}) from hat(g g^{-1}) = hat(1) = 1.
      ExponentVector gp = cg.collect(word_of_gen(d));
      hu = Expr::make_prod(Expr::make_inv(pairing(gp, cg.inverse(gp))),
                           Expr::make_inv(hat_sym(d)));
    }
    ExprPtr res = Expr::make_prod({hu, pairing(u, v), hat(v)});
    memo[nf] = res;
    return res;
  }
};

} // namespace

ExprPtr hat_expansion(const PcPresentation &g, const Int &q,
                      const ExponentVector &x) {
  if (q < 1) throw InvalidArgument("hats are disabled for q = 0");
  HatExpander H(g, q);
  return H.hat(x);
}

NuRelatorInstances nu_relator_instances(const PcPresentation &g, const Int &q) {
  NuRelatorInstances out;
  const int n = g.n();
  Collector c(g);
  HatExpander H(g, q);
  auto nf_gen = [&](int i, int s = 1) { return c.collect(word_of_gen(i, s)); };

  // nu relations [g,h^phi]^k = [g^k,(h^k)^phi] with conjugator in G and in
  // G^phi, plus inverse-conjugator variants for infinite generators.
  int cnt_nu = 0, cnt_nu_inv = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        for (int s : {+1, -1}) {
          if (s < 0 && g.has_power(k)) continue;
          ExponentVector gik = c.conjugate(nf_gen(i), nf_gen(k, s));
          ExponentVector gjk = c.conjugate(nf_gen(j), nf_gen(k, s));
          ExprPtr lhs_rhs = Expr::make_inv(
              Expr::make_comm(H.g_atom(gik), H.phi_atom(gjk)));
          ExprPtr base = Expr::make_comm(Expr::make_gen(i), Expr::make_gen(n + j));
          out.exprs.push_back(Expr::make_prod(
              Expr::make_conj(base, Expr::make_gen(k, s)), lhs_rhs));
          out.exprs.push_back(Expr::make_prod(
              Expr::make_conj(base, Expr::make_gen(n + k, s)), lhs_rhs));
          (s > 0 ? cnt_nu : cnt_nu_inv) += 2;
        }
      }
  out.counts.push_back({"nu-action", cnt_nu});
  out.counts.push_back({"nu-action-inverse", cnt_nu_inv});

  if (q >= 1) {
    int cnt = 0;
    // RR1 / RR2: conjugation of hats by G and by G^phi.
    for (int fam : {1, 2}) {
      cnt = 0;
      for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k) {
          for (int s : {+1, -1}) {
            if (s < 0 && g.has_power(i)) continue;
            ExponentVector kg = c.conjugate(nf_gen(k), nf_gen(i, s));
            int conj_gen = fam == 1 ? i : n + i;
            out.exprs.push_back(Expr::make_prod(
                Expr::make_conj(H.hat_sym(k), Expr::make_gen(conj_gen, s)),
                Expr::make_inv(H.hat(kg))));
            ++cnt;
          }
        }
      out.counts.push_back({fam == 1 ? "RR1" : "RR2", cnt});
    }
    // RR3: hats conjugate the tensor block by q-th powers.
    cnt = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          ExponentVector kq = c.power(nf_gen(k), q);
          ExponentVector gi = c.conjugate(nf_gen(i), kq);
          ExponentVector gj = c.conjugate(nf_gen(j), kq);
          out.exprs.push_back(Expr::make_prod(
              Expr::make_conj(Expr::make_comm(Expr::make_gen(i), Expr::make_gen(n + j)),
                              H.hat_sym(k)),
              Expr::make_inv(Expr::make_comm(H.g_atom(gi), H.phi_atom(gj)))));
          ++cnt;
        }
    out.counts.push_back({"RR3", cnt});
    // RR4: the product law for hats.
    cnt = 0;
    for (int k = 1; k <= n; ++k)
      for (int k1 = 1; k1 <= n; ++k1) {
        ExponentVector kk1 = c.mul(nf_gen(k), word_of_gen(k1));
        out.exprs.push_back(Expr::make_prod(
            {Expr::make_inv(H.hat_sym(k)), H.hat(kk1),
             Expr::make_inv(H.hat_sym(k1)),
             Expr::make_inv(H.pairing(nf_gen(k), nf_gen(k1)))}));
        ++cnt;
      }
    out.counts.push_back({"RR4", cnt});
    // RR5: [hat k, hat k1] = [k^q, (k1^q)^phi].
    cnt = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        out.exprs.push_back(Expr::make_prod(
            Expr::make_comm(H.hat_sym(i), H.hat_sym(j)),
            Expr::make_inv(Expr::make_comm(H.g_atom(c.power(nf_gen(i), q)),
                                           H.phi_atom(c.power(nf_gen(j), q))))));
        ++cnt;
      }
    out.counts.push_back({"RR5", cnt});
    // RR6: hat([g,h]) = [g, h^phi]^q.
    cnt = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        ExponentVector comm = c.commutator(nf_gen(i), nf_gen(j));
        out.exprs.push_back(Expr::make_prod(
            H.hat(comm),
            Expr::make_pow(Expr::make_comm(Expr::make_gen(i), Expr::make_gen(n + j)),
                           -q)));
        ++cnt;
      }
    out.counts.push_back({"RR6", cnt});
  }
  return out;
}

// ---------------------------------------------------------------------------

InducedSequence derived_power_subgroup(const PcPresentation &g, const Int &q) {
  Collector c(g);
  std::vector<ExponentVector> gens;
  for (int i = 1; i <= g.n(); ++i)
    for (int j = i + 1; j <= g.n(); ++j)
      gens.push_back(c.commutator(c.collect(word_of_gen(i)), c.collect(word_of_gen(j))));
  if (q >= 1)
    for (int k = 1; k <= g.n(); ++k)
      gens.push_back(c.power(c.collect(word_of_gen(k)), q));
  IgsOptions opts;
  for (int i = 1; i <= g.n(); ++i)
    opts.normal_closure_by.push_back(c.collect(word_of_gen(i)));
  return induced_sequence(g, gens, opts);
}

bool is_q_perfect(const PcPresentation &g, const Int &q) {
  return derived_power_subgroup(g, q).is_whole_group();
}

ExponentVector NuContext::psi(const ExponentVector &x) const {
  Collector ct(tau->pres);
  ExponentVector r = tau->pres.identity();
  for (size_t k = 0; k < x.size(); ++k)
    if (x[k] != 0) r = ct.mul(r, ct.power(psi_gen[k], x[k]));
  return r;
}

namespace {

// rho on tau: g -> g, phi -> g, w_k -> pi(member k of the wedge sequence).
ExponentVector rho_tau(const TauPresentation &tau, const PcPresentation &g,
                       const ExponentVector &x) {
  Collector cg(g);
  const auto &W = tau.wedge->wedge_sequence();
  const auto &cov = tau.wedge->cover();
  ExponentVector r = g.identity();
  for (int idx = 1; idx <= tau.pres.n(); ++idx) {
    const Int &e = x[idx - 1];
    if (e == 0) continue;
    ExponentVector img;
    if (idx <= tau.n)
      img = cg.collect(word_of_gen(idx));
    else if (idx <= 2 * tau.n)
      img = cg.collect(word_of_gen(idx - tau.n));
    else
      img = cov.pi(W.members()[idx - 2 * tau.n - 1].nf);
    r = cg.mul(r, cg.power(img, e));
  }
  return r;
}

// Shared tail of build_nu / build_nu_qperfect: subgroups of the finished
// presentation and the verification battery.
void finish_nu(NuContext &nu) {
  const PcPresentation &p = nu.pres;
  Collector c(p);
  const int n = nu.n;

  std::vector<ExponentVector> ugens;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      ugens.push_back(c.commutator(nu.img_g[i - 1], nu.img_phi[j - 1]));
  for (const auto &h : nu.img_hat) ugens.push_back(h);
  IgsOptions opts;
  for (int i = 1; i <= p.n(); ++i)
    opts.normal_closure_by.push_back(c.collect(word_of_gen(i)));
  nu.upsilon = induced_sequence(p, ugens, opts);
  nu.tensor_pres = subgroup_presentation(nu.upsilon);
  nu.tensor_pres.set_group_name("tensor_" + nu.q.get_str() + "(" +
                                nu.group.group_name() + ")");

  std::vector<ExponentVector> dgens;
  for (int i = 1; i <= n; ++i)
    dgens.push_back(c.commutator(nu.img_g[i - 1], nu.img_phi[i - 1]));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      dgens.push_back(c.mul(c.commutator(nu.img_g[i - 1], nu.img_phi[j - 1]),
                            c.commutator(nu.img_g[j - 1], nu.img_phi[i - 1])));
  nu.delta = induced_sequence(p, dgens);
  for (const auto &m : nu.delta.members())
    for (int i = 1; i <= p.n(); ++i)
      if (Collector::depth(c.commutator(m.nf, c.collect(word_of_gen(i)))) != 0)
        throw InternalError("diagonal subgroup is not central");
  // Delta lies in the kernel of psi.
  for (const auto &m : nu.delta.members())
    if (Collector::depth(nu.psi(m.nf)) != 0)
      throw InternalError("diagonal subgroup is not in the kernel of psi");
  nu.delta_pres = subgroup_presentation(nu.delta);
  nu.delta_pres.set_group_name("delta_" + nu.q.get_str() + "(" +
                               nu.group.group_name() + ")");

  // Upsilon / Delta must match the wedge (orders and abelian invariants).
  std::vector<ExponentVector> dnf;
  for (const auto &m : nu.delta.members()) dnf.push_back(m.nf);
  CentralQuotient uq = quotient_by_central(nu.upsilon, dnf);
  const PcPresentation &wp = nu.tau->wedge->wedge_presentation();
  if (!(order(uq.pres) == order(wp)) ||
      hirsch_length(uq.pres) != hirsch_length(wp) ||
      abelianization(uq.pres) != abelianization(wp))
    throw InternalError("Upsilon/Delta does not match the exterior square");
}

} // namespace

NuContext build_nu(const PcPresentation &g, const Int &q) {
  NuContext nu;
  nu.group = g;
  nu.q = q;
  nu.n = g.n();
  nu.tau = std::make_shared<TauPresentation>(build_tau(g, q));
  const TauPresentation &tau = *nu.tau;
  const WedgeContext &wc = *tau.wedge;
  const int n = tau.n, r = tau.r;

  // Attach tails to families (3), (4), (5) only; (1), (2) are redundant.
  std::vector<RelatorRef> rels = enumerate_relators(tau.pres);
  std::set<int> skip;
  for (size_t i = 0; i < rels.size(); ++i) {
    int fam = tau_relator_family(tau, rels[i]);
    if (fam == 1 || fam == 2) skip.insert(static_cast<int>(i));
  }
  TailedPresentation tp = attach_tails(tau.pres, q, skip);
  ConsistentCover cov2 = enforce_consistency(tp);
  Collector c2(cov2.E);

  // The generators of L = <g, g^phi, hat(g)> as cover elements.
  std::vector<ExponentVector> symbols;
  for (int i = 1; i <= n; ++i) symbols.push_back(c2.collect(word_of_gen(i)));
  for (int i = 1; i <= n; ++i) symbols.push_back(c2.collect(word_of_gen(n + i)));
  if (q >= 1) {
    for (int i = 1; i <= n; ++i) {
      std::vector<Int> lam = wc.lambda(Word(), Word(), word_of_gen(i));
      symbols.push_back(c2.collect(wc.coords_to_word(lam, 2 * n)));
    }
  }
  InducedSequence L = induced_sequence(cov2.E, symbols);

  // Evaluate the nu relator instances into the tail subgroup.
  NuRelatorInstances inst = nu_relator_instances(g, q);
  std::vector<ExponentVector> zvals;
  for (const auto &e : inst.exprs) {
    ExponentVector v = evaluate_symbol_expr(e, symbols, c2);
    if (!cov2.in_tail_subgroup(v))
      throw InternalError("nu relator instance has a non-central value");
    if (Collector::depth(v) != 0 &&
        std::find(zvals.begin(), zvals.end(), v) == zvals.end())
      zvals.push_back(v);
  }

  CentralQuotient quo = quotient_by_central(L, zvals);
  nu.pres = quo.pres;
  nu.pres.set_group_name("nu_" + q.get_str() + "(" + g.group_name() + ")");
  for (int i = 0; i < n; ++i) {
    nu.img_g.push_back(quo.image_of(symbols[i]));
    nu.img_phi.push_back(quo.image_of(symbols[n + i]));
    if (q >= 1) nu.img_hat.push_back(quo.image_of(symbols[2 * n + i]));
  }
  // psi and rho on the quotient generators through their source members.
  Collector ctau(tau.pres);
  for (size_t k = 0; k < quo.source_index.size(); ++k) {
    const IgsMember &m = L.members()[quo.source_index[k] - 1];
    ExponentVector t = ctau.collect(ctau.to_word(
        ExponentVector(m.nf.begin(), m.nf.begin() + tau.pres.n())));
    nu.psi_gen.push_back(t);
    nu.rho_gen.push_back(rho_tau(tau, g, t));
  }
  finish_nu(nu);
  return nu;
}

NuContext build_nu_qperfect(const PcPresentation &g, const Int &q) {
  if (!is_q_perfect(g, q))
    throw InvalidArgument("group is not q-perfect: G'G^q is a proper subgroup");
  NuContext nu;
  nu.group = g;
  nu.q = q;
  nu.n = g.n();
  nu.via_shortcut = true;
  nu.tau = std::make_shared<TauPresentation>(build_tau(g, q));
  const TauPresentation &tau = *nu.tau;
  nu.pres = tau.pres;
  nu.pres.set_group_name("nu_" + q.get_str() + "(" + g.group_name() + ")");
  Collector c(nu.pres);
  for (int i = 1; i <= nu.n; ++i) {
    nu.img_g.push_back(c.collect(word_of_gen(i)));
    nu.img_phi.push_back(c.collect(word_of_gen(nu.n + i)));
  }
  if (q >= 1)
    for (int i = 1; i <= nu.n; ++i) {
      std::vector<Int> lam = tau.wedge->lambda(Word(), Word(), word_of_gen(i));
      nu.img_hat.push_back(c.collect(tau.wedge->coords_to_word(lam, 2 * nu.n)));
    }
  for (int k = 1; k <= nu.pres.n(); ++k) {
    nu.psi_gen.push_back(c.collect(word_of_gen(k)));
    nu.rho_gen.push_back(rho_tau(tau, g, nu.psi_gen.back()));
  }
  finish_nu(nu);
  if (!nu.delta.trivial())
    throw InternalError("diagonal of a q-perfect group is not trivial");
  return nu;
}

PcPresentation tensor_square(const NuContext &nu) { return nu.tensor_pres; }

PcPresentation diagonal(const NuContext &nu) { return nu.delta_pres; }

ExponentVector rho(const NuContext &nu, const ExponentVector &x) {
  if (!nu.upsilon.contains(x))
    throw InvalidArgument("rho: element is not in the tensor subgroup");
  Collector cg(nu.group);
  ExponentVector r = nu.group.identity();
  for (size_t k = 0; k < x.size(); ++k)
    if (x[k] != 0) r = cg.mul(r, cg.power(nu.rho_gen[k], x[k]));
  return r;
}

} // namespace qpc
