#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "qpc/oracle.hpp"
#include "qpc/qnu.hpp"
#include "qpc/structure.hpp"

#include <random>

using namespace qpc;
using namespace qpc::test;

namespace {

Int pres_order(const PcPresentation &p) {
  Cardinal c = order(p);
  return c.finite ? c.value : Int(0);
}

} // namespace

TEST_CASE("tau^2(S3): 5 generators and the printed mixed relation") {
  TauPresentation tau = build_tau(s3(), 2);
  CHECK(tau.pres.n() == 2 * 2 + tau.r);
  CHECK(consistency_report(tau.pres).consistent());
  // g1^{-1} g2^phi g1 = g2^phi w^2 with w = lambda(g1, g2, g1), the canonical
  // order-6 generator of the wedge.
  Collector c(tau.pres);
  const WedgeContext &wc = *tau.wedge;
  auto wcoords = wc.lambda(parse_word(s3(), "g1"), parse_word(s3(), "g2"),
                           parse_word(s3(), "g1"));
  ExponentVector w_in_tau = c.collect(wc.coords_to_word(wcoords, 2 * tau.n));
  ExponentVector rhs = c.collect(tau.pres.conj(tau.phi_index(2), tau.g_index(1)));
  ExponentVector expect =
      c.mul(c.collect(word_of_gen(tau.phi_index(2))), c.power(w_in_tau, Int(2)));
  CHECK(rhs == expect);
}

TEST_CASE("tau^2(Dinf): 7 generators and g2^{-1} g1^phi g2 = g1^phi w1 w3") {
  TauPresentation tau = build_tau(dinf(), 2);
  CHECK(tau.pres.n() == 7);
  CHECK(consistency_report(tau.pres).consistent());
  Collector c(tau.pres);
  ExponentVector rhs = c.collect(tau.pres.conj(tau.phi_index(1), tau.g_index(2)));
  Word expect = parse_word(tau.pres, "g1f*w1*w3");
  CHECK(rhs == c.collect(expect));
}

TEST_CASE("tau of the trivial group") {
  auto p = parse_presentation("group T\ngens\nend\n").presentation;
  TauPresentation tau = build_tau(p, 2);
  CHECK(tau.pres.n() == 0);
}

TEST_CASE("nu relator instance counts") {
  // n = 2, all generators finite: no inverse variants.
  NuRelatorInstances inst = nu_relator_instances(s3(), 2);
  const int n = 2;
  auto count_of = [&](const std::string &k) {
    for (auto &[key, v] : inst.counts)
      if (key == k) return v;
    return -1;
  };
  CHECK(count_of("nu-action") == 2 * n * n * n);
  CHECK(count_of("nu-action-inverse") == 0);
  CHECK(count_of("RR1") == n * n);
  CHECK(count_of("RR2") == n * n);
  CHECK(count_of("RR3") == n * n * n);
  CHECK(count_of("RR4") == n * n);
  CHECK(count_of("RR5") == n * (n - 1) / 2);
  CHECK(count_of("RR6") == n * n);
  // q = 0: only the nu action families survive.
  NuRelatorInstances inst0 = nu_relator_instances(s3(), 0);
  CHECK(inst0.counts.size() == 2);
  CHECK(inst0.total() == 2 * n * n * n);
  // infinite generators contribute inverse variants
  NuRelatorInstances insti = nu_relator_instances(dinf(), 2);
  auto count_in = [&](const NuRelatorInstances &vv, const std::string &k) {
    for (auto &[key, v] : vv.counts)
      if (key == k) return v;
    return -1;
  };
  CHECK(count_in(insti, "nu-action") == 16);
  CHECK(count_in(insti, "nu-action-inverse") == 8);
  // q = 1: RR4 instances have empty product sides but still exist
  NuRelatorInstances inst1 = nu_relator_instances(s3(), 1);
  CHECK(count_in(inst1, "RR4") == 4);
}

TEST_CASE("nu^2(S3): order 432, tensor Z12, diagonal Z2") {
  NuContext nu = build_nu(s3(), 2);
  CHECK(consistency_report(nu.pres).consistent());
  CHECK(pres_order(nu.pres) == 432);
  PcPresentation t = tensor_square(nu);
  CHECK(is_abelian(t));
  CHECK(abelianization(t) == std::vector<Int>{12});
  PcPresentation d = diagonal(nu);
  CHECK(abelianization(d) == std::vector<Int>{2});
  // |nu| = |G|^2 |tensor|
  CHECK(pres_order(nu.pres) == 36 * pres_order(t));
}

TEST_CASE("nu^3(Dinf): tensor is Dinf again") {
  NuContext nu = build_nu(dinf(), 3);
  CHECK(consistency_report(nu.pres).consistent());
  PcPresentation t = tensor_square(nu);
  CHECK(matches_presentation(t, dinf()) == MatchVerdict::Yes);
  CHECK(nu.delta.trivial());
}

TEST_CASE("nu(C2) at q = 0 has order 8") {
  NuContext nu = build_nu(c2(), 0);
  CHECK(pres_order(nu.pres) == 8);
  PcPresentation t = tensor_square(nu);
  CHECK(is_abelian(t));
  CHECK(abelianization(t) == oracle::abelian_tensor({2}, {2}));
  // C2 x C2: delta = full tensor, C2 at q=0
  PcPresentation d = diagonal(nu);
  CHECK(abelianization(d) == std::vector<Int>{2});
}

TEST_CASE("q-perfect detection and the shortcut") {
  CHECK(is_q_perfect(c3(), 2));
  CHECK(!is_q_perfect(s3(), 2)); // squares and commutators generate A3
  CHECK_THROWS_AS(build_nu_qperfect(s3(), 2), InvalidArgument);
  // the trivial group is q-perfect for every q
  auto triv = parse_presentation("group T\ngens\nend\n").presentation;
  CHECK(is_q_perfect(triv, 2));
  NuContext nu = build_nu_qperfect(triv, 2);
  CHECK(nu.pres.n() == 0);

  for (auto [file, qs] : std::vector<std::pair<const char *, std::vector<int>>>{
           {"c3", {2}}, {"c5", {2, 3}}}) {
    PcPresentation p = load(file);
    for (int q : qs) {
      CAPTURE(file); CAPTURE(q);
      NuContext fast = build_nu_qperfect(p, q);
      NuContext full = build_nu(p, q);
      PcPresentation tf = tensor_square(fast);
      PcPresentation tg = tensor_square(full);
      CHECK(is_isomorphic_abelian(tf, tg));
      CHECK(fast.delta.trivial());
      CHECK(full.delta.trivial());
      CHECK(pres_order(fast.pres) == pres_order(full.pres));
    }
  }
}

TEST_CASE("rho sends tensors to commutators and hats to powers") {
  PcPresentation G = s3();
  NuContext nu = build_nu(G, 2);
  Collector c(nu.pres);
  Collector cg(G);
  // rho(g1 (x) g2) = [g1, g2] = g2^2
  ExponentVector x = c.commutator(nu.img_g[0], nu.img_phi[1]);
  CHECK(rho(nu, x) == ev(G, "g2^2"));
  // rho(hat g2) = g2^2
  CHECK(rho(nu, nu.img_hat[1]) == ev(G, "g2^2"));
  // the image subgroup is G'G^2 = <g2> = C3
  std::vector<ExponentVector> imgs;
  for (const auto &m : nu.upsilon.members()) imgs.push_back(rho(nu, m.nf));
  InducedSequence im = induced_sequence(G, imgs);
  CHECK(im.order() == 3);
  CHECK(derived_power_subgroup(G, 2).order() == 3);
  // non-members are rejected
  CHECK_THROWS_AS(rho(nu, nu.img_g[0]), InvalidArgument);
  // rho is a homomorphism on random tensor elements
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Int> ca(nu.upsilon.size()), cb(nu.upsilon.size());
    for (auto &v : ca) v = static_cast<long>(rng() % 3);
    for (auto &v : cb) v = static_cast<long>(rng() % 3);
    ExponentVector a = nu.upsilon.element(ca), b = nu.upsilon.element(cb);
    CHECK(rho(nu, c.mul(a, b)) == cg.mul(rho(nu, a), rho(nu, b)));
  }
}

TEST_CASE("psi is a homomorphism with the diagonal in its kernel") {
  NuContext nu = build_nu(s3(), 2);
  Collector ct(nu.tau->pres);
  Collector c(nu.pres);
  // check on the defining relations of nu.pres
  for (int i = 1; i <= nu.pres.n(); ++i) {
    if (nu.pres.has_power(i)) {
      ExponentVector lhs = ct.power(nu.psi_gen[i - 1], nu.pres.exponent(i));
      ExponentVector rhs = nu.psi(c.collect(nu.pres.power_rhs(i)));
      CHECK(lhs == rhs);
    }
    for (int j = 1; j < i; ++j) {
      ExponentVector lhs = ct.conjugate(nu.psi_gen[i - 1], nu.psi_gen[j - 1]);
      ExponentVector rhs = nu.psi(c.collect(nu.pres.conj(i, j)));
      CHECK(lhs == rhs);
    }
  }
  for (const auto &m : nu.delta.members())
    CHECK(Collector::depth(nu.psi(m.nf)) == 0);
}

TEST_CASE("decomposition order identity over the corpus") {
  for (auto name : {"c2", "c3", "c4", "s3", "c2c2"}) {
    PcPresentation p = load(name);
    for (int q : {0, 1, 2, 3}) {
      CAPTURE(name); CAPTURE(q);
      NuContext nu = build_nu(p, q);
      Int o = pres_order(p);
      CHECK(pres_order(nu.pres) == o * o * pres_order(tensor_square(nu)));
      CHECK(consistency_report(nu.pres).consistent());
      CHECK(consistency_report(nu.tensor_pres).consistent());
    }
  }
}

TEST_CASE("tensor defining laws hold for the realized symbols") {
  std::mt19937_64 rng(77);
  for (auto name : {"s3", "c4"}) {
    PcPresentation p = load(name);
    for (int q : {1, 2}) {
      CAPTURE(name); CAPTURE(q);
      NuContext nu = build_nu(p, q);
      Collector c(nu.pres);
      Collector cg(p);
      auto lift_g = [&](const ExponentVector &x) {
        ExponentVector r = nu.pres.identity();
        for (size_t i = 0; i < x.size(); ++i)
          if (x[i] != 0) r = c.mul(r, c.power(nu.img_g[i], x[i]));
        return r;
      };
      auto lift_phi = [&](const ExponentVector &x) {
        ExponentVector r = nu.pres.identity();
        for (size_t i = 0; i < x.size(); ++i)
          if (x[i] != 0) r = c.mul(r, c.power(nu.img_phi[i], x[i]));
        return r;
      };
      // hat of an arbitrary element via the instance machinery
      std::vector<ExponentVector> syms;
      for (auto &v : nu.img_g) syms.push_back(v);
      for (auto &v : nu.img_phi) syms.push_back(v);
      for (auto &v : nu.img_hat) syms.push_back(v);
      auto random_elt = [&] {
        ExponentVector x = p.identity();
        for (int i = 0; i < p.n(); ++i) x[i] = static_cast<long>(rng() % 2);
        return x;
      };
      auto hat = [&](const ExponentVector &k) {
        return evaluate_symbol_expr(hat_expansion(p, q, k), syms, c);
      };
      for (int trial = 0; trial < 12; ++trial) {
        ExponentVector g = random_elt(), h = random_elt(), k = random_elt(),
                       k1 = random_elt();
        ExponentVector tg = lift_g(g), th = lift_phi(h);
        // (qts3): [g, h^phi]^{hat k} = [g^{k^q}, (h^{k^q})^phi]
        ExponentVector kq = cg.power(k, q);
        ExponentVector lhs = c.conjugate(c.commutator(tg, th), hat(k));
        ExponentVector rhs = c.commutator(lift_g(cg.conjugate(g, kq)),
                                          lift_phi(cg.conjugate(h, kq)));
        CHECK(lhs == rhs);
        // (qts4): hat(k k1) = hat(k) prod [k, (k1^{-i})^phi]^{k^{q-1-i}} hat(k1)
        ExponentVector prod = hat(k);
        for (int i = 1; i < q; ++i) {
          ExponentVector fac = c.commutator(lift_g(k), lift_phi(cg.power(k1, -i)));
          prod = c.mul(prod, c.conjugate(fac, lift_g(cg.power(k, q - 1 - i))));
        }
        prod = c.mul(prod, hat(k1));
        CHECK(hat(cg.mul(k, k1)) == prod);
        // (qts5): [hat k, hat k1] = k^q (x) k1^q
        CHECK(c.commutator(hat(k), hat(k1)) ==
              c.commutator(lift_g(cg.power(k, q)), lift_phi(cg.power(k1, q))));
        // (qts6): hat([g,h]) = (g (x) h)^q
        ExponentVector comm = cg.commutator(g, h);
        CHECK(hat(comm) ==
              c.power(c.commutator(lift_g(g), th), q));
      }
    }
  }
}
