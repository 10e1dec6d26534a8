#include "qpc/structure.hpp"

#include "qpc/subgrp.hpp"

#include <algorithm>

namespace qpc {

Cardinal order(const PcPresentation &pres) {
  Cardinal c;
  for (int i = 1; i <= pres.n(); ++i) {
    if (!pres.has_power(i)) return Cardinal{false, 0};
    c.value *= pres.exponent(i);
  }
  return c;
}

int hirsch_length(const PcPresentation &pres) {
  int h = 0;
  for (int i = 1; i <= pres.n(); ++i)
    if (!pres.has_power(i)) ++h;
  return h;
}

namespace {

std::vector<Int> expsum(const PcPresentation &p, const Word &w) {
  std::vector<Int> v(p.n(), Int(0));
  for (const Letter &l : w) v[l.gen - 1] += l.exp;
  return v;
}

} // namespace

std::vector<Int> abelianization(const PcPresentation &pres) {
  std::vector<std::vector<Int>> rows;
  for (int i = 1; i <= pres.n(); ++i) {
    if (pres.has_power(i)) {
      std::vector<Int> row = expsum(pres, pres.power_rhs(i));
      for (auto &x : row) x = -x;
      row[i - 1] += pres.exponent(i);
      rows.push_back(std::move(row));
    }
    for (int j = 1; j < i; ++j) {
      if (pres.has_conj(i, j)) {
        std::vector<Int> row = expsum(pres, pres.conj(i, j));
        for (auto &x : row) x = -x;
        row[i - 1] += 1;
        rows.push_back(std::move(row));
      }
      if (auto ci = pres.conj_inv(i, j)) {
        std::vector<Int> row = expsum(pres, *ci);
        for (auto &x : row) x = -x;
        row[i - 1] += 1;
        rows.push_back(std::move(row));
      }
    }
  }
  IntMatrix rel = rows.empty() ? IntMatrix(0, pres.n()) : IntMatrix::from_rows(rows);
  return abelian_invariants(rel, pres.n());
}

bool is_abelian(const PcPresentation &pres) {
  Collector c(pres);
  for (int i = 2; i <= pres.n(); ++i)
    for (int j = 1; j < i; ++j)
      if (c.collect(pres.conj(i, j)) != c.collect(word_of_gen(i))) return false;
  return true;
}

std::string invariant_string(const std::vector<Int> &invariants) {
  if (invariants.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < invariants.size(); ++i) {
    if (i) s += " x ";
    s += invariants[i] == 0 ? "Z" : "C" + invariants[i].get_str();
  }
  return s;
}

StructureDescription describe(const PcPresentation &pres) {
  StructureDescription d;
  d.order = order(pres);
  d.hirsch = hirsch_length(pres);
  d.abelianization = abelianization(pres);
  d.abelian = is_abelian(pres);
  if (d.abelian) {
    d.display = invariant_string(d.abelianization);
  } else if (d.order.finite) {
    d.display = "order " + d.order.value.get_str() + ", ab = " +
                invariant_string(d.abelianization);
  } else {
    d.display = "infinite, hirsch " + std::to_string(d.hirsch) + ", ab = " +
                invariant_string(d.abelianization);
  }
  return d;
}

bool is_isomorphic_abelian(const PcPresentation &p1, const PcPresentation &p2) {
  if (!is_abelian(p1) || !is_abelian(p2))
    throw InvalidArgument("is_isomorphic_abelian requires abelian presentations");
  return abelianization(p1) == abelianization(p2);
}

namespace {

// Bounded element pool: full coordinate ranges at finite depths, small window
// at infinite depths.
std::vector<ExponentVector> element_pool(const PcPresentation &p, long cap) {
  std::vector<ExponentVector> pool;
  std::vector<Int> lo(p.n()), hi(p.n());
  for (int i = 1; i <= p.n(); ++i) {
    if (p.has_power(i)) {
      lo[i - 1] = 0;
      hi[i - 1] = p.exponent(i) - 1;
    } else {
      lo[i - 1] = -2;
      hi[i - 1] = 2;
    }
  }
  ExponentVector x = lo;
  for (;;) {
    pool.push_back(x);
    if (static_cast<long>(pool.size()) > cap) return pool;
    int pos = p.n() - 1;
    while (pos >= 0) {
      x[pos] += 1;
      if (x[pos] <= hi[pos]) break;
      x[pos] = lo[pos];
      --pos;
    }
    if (pos < 0) break;
  }
  return pool;
}

// Search an epimorphism from `from` onto `onto`.
bool find_epimorphism(const PcPresentation &onto, const PcPresentation &from,
                      long budget) {
  Collector c(onto);
  long pool_cap = 4000;
  std::vector<ExponentVector> pool = element_pool(onto, pool_cap);
  const int m = from.n();
  if (m == 0) return onto.n() == 0;
  std::vector<size_t> pick(m, 0);
  long tried = 0;
  for (;;) {
    if (++tried > budget) return false;
    std::vector<ExponentVector> img(m);
    for (int i = 0; i < m; ++i) img[i] = pool[pick[i]];
    auto eval_word = [&](const Word &w) {
      ExponentVector r = onto.identity();
      for (const Letter &l : w) r = c.mul(r, c.power(img[l.gen - 1], l.exp));
      return r;
    };
    bool ok = true;
    for (int i = 1; i <= m && ok; ++i) {
      if (from.has_power(i))
        ok = c.power(img[i - 1], from.exponent(i)) == eval_word(from.power_rhs(i));
      for (int j = 1; j < i && ok; ++j) {
        if (from.has_conj(i, j))
          ok = c.conjugate(img[i - 1], img[j - 1]) == eval_word(from.conj(i, j));
        if (ok)
          if (auto ci = from.conj_inv(i, j))
            ok = c.conjugate(img[i - 1], c.inverse(img[j - 1])) == eval_word(*ci);
      }
    }
    if (ok) {
      if (induced_sequence(onto, img).is_whole_group()) return true;
    }
    int pos = m - 1;
    while (pos >= 0) {
      if (++pick[pos] < pool.size()) break;
      pick[pos] = 0;
      --pos;
    }
    if (pos < 0) return false;
  }
}

} // namespace

MatchVerdict matches_presentation(const PcPresentation &p1, const PcPresentation &p2,
                                  long budget) {
  Cardinal o1 = order(p1), o2 = order(p2);
  if (!(o1 == o2)) return MatchVerdict::No;
  if (hirsch_length(p1) != hirsch_length(p2)) return MatchVerdict::No;
  if (abelianization(p1) != abelianization(p2)) return MatchVerdict::No;
  bool a1 = is_abelian(p1), a2 = is_abelian(p2);
  if (a1 != a2) return MatchVerdict::No;
  if (a1 && a2) return MatchVerdict::Yes; // invariants already agree
  if (!find_epimorphism(p1, p2, budget)) return MatchVerdict::Unknown;
  if (o1.finite) return MatchVerdict::Yes;
  // Infinite case: polycyclic groups are Hopfian, so epimorphisms both ways
  // certify an isomorphism.
  if (find_epimorphism(p2, p1, budget)) return MatchVerdict::Yes;
  return MatchVerdict::Unknown;
}

} // namespace qpc
