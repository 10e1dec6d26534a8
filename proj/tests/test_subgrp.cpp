#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "qpc/covers.hpp"
#include "qpc/oracle.hpp"
#include "qpc/structure.hpp"
#include "qpc/subgrp.hpp"

#include <random>

using namespace qpc;
using namespace qpc::test;

TEST_CASE("induced sequence in E_2(Dinf)") {
  ConsistentCover cov = enforce_consistency(attach_tails(dinf(), 2));
  Collector c(cov.E);
  std::vector<ExponentVector> gens = {
      c.evaluate(parse_expression(cov.E, "[g1,g2]")),
      ev(cov.E, "g1^2"),
      ev(cov.E, "g2^2"),
  };
  InducedSequence seq = induced_sequence(cov.E, gens);
  REQUIRE(seq.size() == 3);
  CHECK(seq.members()[0].depth == 2);
  CHECK(seq.members()[1].depth == 3);
  CHECK(seq.members()[2].depth == 4);
  // Canonical members are g2^2, t1, t2.
  CHECK(seq.members()[0].nf == ev(cov.E, "g2^2"));
  CHECK(seq.members()[1].nf == ev(cov.E, "t1"));
  CHECK(seq.members()[2].nf == ev(cov.E, "t2"));

  // express: [g1,g2] = w1 w3 (coordinates (1,0,1)).
  auto coords = seq.express(c.evaluate(parse_expression(cov.E, "[g1,g2]")));
  REQUIRE(coords.has_value());
  CHECK(*coords == std::vector<Int>{1, 0, 1});
  CHECK(seq.express(cov.E.identity()).value() == std::vector<Int>{0, 0, 0});
}

TEST_CASE("induced sequence in E_2(S3)") {
  ConsistentCover cov = enforce_consistency(attach_tails(s3(), 2));
  Collector c(cov.E);
  std::vector<ExponentVector> gens = {
      c.evaluate(parse_expression(cov.E, "[g1,g2]")),
      ev(cov.E, "g1^2"),
      ev(cov.E, "g2^2"),
  };
  InducedSequence seq = induced_sequence(cov.E, gens);
  CHECK(seq.size() == 2);
  CHECK(seq.order() == 6);
  // g1 is not a member: its image under pi lies outside G'G^2.
  CHECK(!seq.contains(ev(cov.E, "g1")));
}

TEST_CASE("empty generating set") {
  PcPresentation p = s3();
  InducedSequence seq = induced_sequence(p, {});
  CHECK(seq.trivial());
  CHECK(seq.order() == 1);
}

TEST_CASE("subgroup presentations") {
  {
    ConsistentCover cov = enforce_consistency(attach_tails(s3(), 2));
    Collector c(cov.E);
    InducedSequence W = induced_sequence(
        cov.E, {c.evaluate(parse_expression(cov.E, "[g1,g2]")), ev(cov.E, "g1^2"),
                ev(cov.E, "g2^2")});
    PcPresentation wp = subgroup_presentation(W);
    CHECK(consistency_report(wp).consistent());
    CHECK(order(wp).value == 6);
    CHECK(is_abelian(wp));
    CHECK(abelianization(wp) == std::vector<Int>{6});
  }
  {
    ConsistentCover cov = enforce_consistency(attach_tails(dinf(), 2));
    Collector c(cov.E);
    InducedSequence W = induced_sequence(
        cov.E, {c.evaluate(parse_expression(cov.E, "[g1,g2]")), ev(cov.E, "g1^2"),
                ev(cov.E, "g2^2")});
    PcPresentation wp = subgroup_presentation(W);
    CHECK(consistency_report(wp).consistent());
    CHECK(!order(wp).finite);
    CHECK(hirsch_length(wp) == 1);
    CHECK(abelianization(wp) == std::vector<Int>({2, 2, 0}));
  }
  {
    InducedSequence seq = induced_sequence(s3(), {});
    CHECK(subgroup_presentation(seq).n() == 0);
  }
}

TEST_CASE("membership round trip on random subgroup words") {
  std::mt19937_64 rng(99);
  ConsistentCover cov = enforce_consistency(attach_tails(d4(), 2));
  Collector c(cov.E);
  std::vector<ExponentVector> gens = {
      c.evaluate(parse_expression(cov.E, "[g1,g2]")), ev(cov.E, "g1^2"),
      ev(cov.E, "g2^2")};
  InducedSequence seq = induced_sequence(cov.E, gens);
  for (int trial = 0; trial < 40; ++trial) {
    ExponentVector x = cov.E.identity();
    for (int i = 0; i < 5; ++i) {
      const auto &g = gens[rng() % gens.size()];
      x = (rng() % 2) ? c.mul(x, g) : c.mul(x, c.inverse(g));
    }
    auto coords = seq.express(x);
    REQUIRE(coords.has_value());
    CHECK(seq.element(*coords) == x);
  }
}

TEST_CASE("tail intersection of the wedge subgroup") {
  {
    ConsistentCover cov = enforce_consistency(attach_tails(s3(), 2));
    Collector c(cov.E);
    InducedSequence W = induced_sequence(
        cov.E, {c.evaluate(parse_expression(cov.E, "[g1,g2]")), ev(cov.E, "g1^2"),
                ev(cov.E, "g2^2")});
    InducedSequence T = tail_intersection(W, cov.first_tail_index());
    CHECK(T.order() == 2);
    for (const auto &m : T.members()) CHECK(cov.in_tail_subgroup(m.nf));
  }
  {
    ConsistentCover cov = enforce_consistency(attach_tails(dinf(), 2));
    Collector c(cov.E);
    InducedSequence W = induced_sequence(
        cov.E, {c.evaluate(parse_expression(cov.E, "[g1,g2]")), ev(cov.E, "g1^2"),
                ev(cov.E, "g2^2")});
    InducedSequence T = tail_intersection(W, cov.first_tail_index());
    CHECK(T.order() == 4);
    PcPresentation tp = subgroup_presentation(T);
    CHECK(abelianization(tp) == std::vector<Int>({2, 2}));
  }
}

TEST_CASE("center strategies") {
  // E_2(S3): <t1, t3> of order 4.
  {
    ConsistentCover cov = enforce_consistency(attach_tails(s3(), 2));
    InducedSequence z = center(cov.E);
    CHECK(z.order() == 4);
    for (const auto &m : z.members()) CHECK(cov.in_tail_subgroup(m.nf));
  }
  // E_q(Dinf): <t1, t2> of order q^2.
  for (int q : {2, 3, 5}) {
    ConsistentCover cov = enforce_consistency(attach_tails(dinf(), q));
    InducedSequence z = center(cov.E);
    CHECK(z.order() == q * q);
    for (const auto &m : z.members()) CHECK(cov.in_tail_subgroup(m.nf));
  }
  // Dinf itself is centerless; abelian groups are their own center.
  CHECK(center(dinf()).trivial());
  CHECK(center(c6()).is_whole_group());
  CHECK(center(c2c2()).is_whole_group());
  // Q8 and D4 have center of order 2.
  CHECK(center(q8()).order() == 2);
  CHECK(center(d4()).order() == 2);
}

TEST_CASE("center agrees with the brute oracle on finite covers") {
  for (auto name : {"s3", "c2c2", "d4", "q8"}) {
    for (int q : {1, 2, 3}) {
      PcPresentation p = load(name);
      ConsistentCover cov = enforce_consistency(attach_tails(p, q));
      CAPTURE(name); CAPTURE(q);
      InducedSequence z = center(cov.E);
      auto table = oracle::enumerate(cov.E);
      auto bc = oracle::brute_center(table);
      CHECK(z.order() == Int(bc.size()));
      for (int idx : bc) CHECK(z.contains(table.elements[idx]));
    }
  }
}

TEST_CASE("central quotients") {
  // E_2(S3) / <t1, t3> = S3.
  {
    ConsistentCover cov = enforce_consistency(attach_tails(s3(), 2));
    InducedSequence whole = induced_sequence(
        cov.E, [&] {
          std::vector<ExponentVector> g;
          Collector c(cov.E);
          for (int i = 1; i <= cov.E.n(); ++i) g.push_back(c.collect(word_of_gen(i)));
          return g;
        }());
    std::vector<ExponentVector> z;
    InducedSequence zc = center(cov.E);
    for (const auto &m : zc.members()) z.push_back(m.nf);
    PcPresentation q = central_quotient(cov, z, whole);
    CHECK(order(q).value == 6);
    CHECK(!is_abelian(q));
    CHECK(abelianization(q) == std::vector<Int>{2});
    CHECK(matches_presentation(q, s3()) == MatchVerdict::Yes);
    // Quotient by nothing changes nothing (up to isomorphism of the ambient).
    PcPresentation same = central_quotient(cov, {}, whole);
    CHECK(order(same).value == 24);
  }
  // E_2(C2) = C4 modulo its tail gives C2.
  {
    ConsistentCover cov = enforce_consistency(attach_tails(c2(), 2));
    Collector c(cov.E);
    InducedSequence whole =
        induced_sequence(cov.E, {c.collect(word_of_gen(1)), c.collect(word_of_gen(2))});
    PcPresentation q = central_quotient(cov, {ev(cov.E, "t1")}, whole);
    CHECK(order(q).value == 2);
    CHECK(abelianization(q) == std::vector<Int>{2});
  }
}
