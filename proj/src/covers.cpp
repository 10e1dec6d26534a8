#include "qpc/covers.hpp"

#include <algorithm>

namespace qpc {

std::string RelatorRef::describe(const PcPresentation &p) const {
  switch (kind) {
  case Kind::Power:
    return "pow " + p.name(i) + "^" + p.exponent(i).get_str();
  case Kind::Conj:
    return "conj " + p.name(i) + "^" + p.name(j);
  case Kind::ConjInv:
    return "cinv " + p.name(i) + "^" + p.name(j);
  }
  return "?";
}

std::vector<RelatorRef> enumerate_relators(const PcPresentation &p) {
  std::vector<RelatorRef> out;
  for (int i = 1; i <= p.n(); ++i) {
    for (int j = 1; j < i; ++j) {
      if (p.has_conj(i, j))
        out.push_back({RelatorRef::Kind::Conj, i, j});
      if (p.has_conj_inv(i, j))
        out.push_back({RelatorRef::Kind::ConjInv, i, j});
    }
    if (p.has_power(i)) out.push_back({RelatorRef::Kind::Power, i, 0});
  }
  return out;
}

namespace {

// Fresh tail names that do not collide with the base generator names.
std::vector<std::string> tail_names(const PcPresentation &base, int count) {
  std::vector<std::string> names;
  int next = 1;
  for (int k = 0; k < count; ++k) {
    std::string cand;
    for (;;) {
      cand = "t" + std::to_string(next++);
      if (base.gen_index(cand) < 0) break;
    }
    names.push_back(cand);
  }
  return names;
}

} // namespace

TailedPresentation attach_tails(const PcPresentation &pres, const Int &q,
                                const std::set<int> &skip_relators) {
  if (q < 0) throw InvalidArgument("q must be >= 0");
  TailedPresentation tp;
  tp.base = pres;
  tp.q = q;
  tp.n_base = pres.n();
  tp.relators = enumerate_relators(pres);
  tp.tail_of_relator.assign(tp.relators.size(), 0);

  int l = 0;
  for (size_t r = 0; r < tp.relators.size(); ++r)
    if (!skip_relators.count(static_cast<int>(r))) ++l;

  const int n = pres.n();
  PcPresentation out(n + l);
  out.set_group_name("eps_" + q.get_str() + "(" + pres.group_name() + ")");
  for (int i = 1; i <= n; ++i) {
    out.set_name(i, pres.name(i));
    out.set_provenance(i, "base generator " + pres.name(i));
  }
  std::vector<std::string> tnames = tail_names(pres, l);
  for (int k = 0; k < l; ++k) out.set_name(n + 1 + k, tnames[k]);

  // Copy base relations; append the tail to each non-skipped relator.
  int next_tail = n; // next tail generator index - 1
  for (size_t r = 0; r < tp.relators.size(); ++r) {
    const RelatorRef &ref = tp.relators[r];
    Word rhs;
    switch (ref.kind) {
    case RelatorRef::Kind::Power: rhs = pres.power_rhs(ref.i); break;
    case RelatorRef::Kind::Conj: rhs = pres.conj(ref.i, ref.j); break;
    case RelatorRef::Kind::ConjInv: rhs = *pres.conj_inv(ref.i, ref.j); break;
    }
    if (!skip_relators.count(static_cast<int>(r))) {
      ++next_tail;
      tp.tail_of_relator[r] = next_tail;
      rhs.emplace_back(next_tail, 1);
      out.set_provenance(next_tail, "tail of relator " + ref.describe(pres));
    }
    switch (ref.kind) {
    case RelatorRef::Kind::Power:
      out.set_power(ref.i, pres.exponent(ref.i), rhs);
      break;
    case RelatorRef::Kind::Conj:
      out.set_conj(ref.i, ref.j, rhs);
      break;
    case RelatorRef::Kind::ConjInv:
      out.set_conj_inv(ref.i, ref.j, rhs);
      break;
    }
  }
  // Copied skipped/remaining structure for generators without tails: power
  // and conjugation relations not listed as relators stay absent (trivial).
  if (q >= 1)
    for (int k = 1; k <= l; ++k) out.set_power(n + k, q, Word());
  tp.pres = std::move(out);
  return tp;
}

ExponentVector ConsistentCover::pi(const ExponentVector &x) const {
  return ExponentVector(x.begin(), x.begin() + n_base);
}

ExponentVector ConsistentCover::lift(const ExponentVector &x) const {
  ExponentVector out = x;
  out.resize(E.n(), Int(0));
  return out;
}

bool ConsistentCover::in_tail_subgroup(const ExponentVector &x) const {
  for (int i = 0; i < n_base; ++i)
    if (x[i] != 0) return false;
  return true;
}

Int ConsistentCover::order() const {
  Int o = 1;
  for (int i = 1; i <= base.n(); ++i) {
    if (!base.has_power(i)) return 0;
    o *= base.exponent(i);
  }
  for (const Int &d : tail_orders) {
    if (d == 0) return 0;
    o *= d;
  }
  return o;
}

ConsistentCover enforce_consistency(const TailedPresentation &tp) {
  const PcPresentation &P = tp.pres;
  const int n = tp.n_base;
  const int l = P.n() - n;

  ConsistencyReport rep = consistency_report(P);
  std::vector<std::vector<Int>> rows;
  for (const auto &v : rep.violations) {
    for (int i = 0; i < n; ++i)
      if (v.discrepancy[i] != 0)
        throw InvalidArgument("consistency discrepancy leaves the tail subgroup; "
                              "the base presentation was not consistent");
    std::vector<Int> row(l);
    for (int k = 0; k < l; ++k) row[k] = v.discrepancy[n + k];
    if (std::any_of(row.begin(), row.end(), [](const Int &x) { return x != 0; })) {
      if (std::find(rows.begin(), rows.end(), row) == rows.end())
        rows.push_back(std::move(row));
    }
  }
  // Stack the q-identity block to impose t^q = 1 uniformly (nothing for q=0).
  IntMatrix M(static_cast<int>(rows.size()) + (tp.q >= 1 ? l : 0), l);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int k = 0; k < l; ++k) M.at(static_cast<int>(r), k) = rows[r][k];
  if (tp.q >= 1)
    for (int k = 0; k < l; ++k) M.at(static_cast<int>(rows.size()) + k, k) = tp.q;

  SmithResult snf = smith_normal_form(M);
  std::vector<Int> diag = snf.diagonal();
  diag.resize(l, Int(0));
  if (tp.q >= 1)
    for (const Int &d : diag)
      if (d == 0 || fmod(tp.q, d) != 0)
        throw InternalError("tail order does not divide q");

  // Survivors and the old-tail -> new-tail words (rows of Q).
  std::vector<int> keep;
  for (int k = 0; k < l; ++k)
    if (diag[k] != 1) keep.push_back(k);
  const int ls = static_cast<int>(keep.size());
  IntMatrix transform(l, ls);
  for (int a = 0; a < l; ++a)
    for (int s = 0; s < ls; ++s) {
      Int v = snf.q.at(a, keep[s]);
      if (diag[keep[s]] != 0) v = fmod(v, diag[keep[s]]);
      transform.at(a, s) = v;
    }

  ConsistentCover cov;
  cov.base = tp.base;
  cov.q = tp.q;
  cov.n_base = n;
  for (int s = 0; s < ls; ++s) cov.tail_orders.push_back(diag[keep[s]]);
  cov.transform = transform;

  PcPresentation E(n + ls);
  E.set_group_name("E_" + tp.q.get_str() + "(" + tp.base.group_name() + ")");
  for (int i = 1; i <= n; ++i) {
    E.set_name(i, P.name(i));
    E.set_provenance(i, P.provenance(i));
  }
  std::vector<std::string> tnames = tail_names(tp.base, ls);
  for (int s = 0; s < ls; ++s) {
    E.set_name(n + 1 + s, tnames[s]);
    std::string prov = "tail of order " +
                       (diag[keep[s]] == 0 ? std::string("0 (infinite)")
                                           : diag[keep[s]].get_str());
    E.set_provenance(n + 1 + s, prov);
  }

  auto rewrite = [&](const Word &w) {
    Word basepart;
    std::vector<Int> tails(ls, Int(0));
    for (const Letter &ltr : w) {
      if (ltr.gen <= n) {
        basepart.push_back(ltr);
      } else {
        int a = ltr.gen - n - 1;
        for (int s = 0; s < ls; ++s) tails[s] += ltr.exp * transform.at(a, s);
      }
    }
    for (int s = 0; s < ls; ++s) {
      Int v = tails[s];
      if (diag[keep[s]] != 0) v = fmod(v, diag[keep[s]]);
      if (v != 0) basepart.emplace_back(n + 1 + s, v);
    }
    return free_reduce(basepart);
  };

  for (int i = 1; i <= n; ++i)
    if (P.has_power(i)) E.set_power(i, P.exponent(i), rewrite(P.power_rhs(i)));
  for (int i = 2; i <= n; ++i)
    for (int j = 1; j < i; ++j) {
      if (P.has_conj(i, j)) {
        Word w = rewrite(P.conj(i, j));
        if (!(w == word_of_gen(i))) E.set_conj(i, j, w);
      }
      if (auto ci = P.conj_inv(i, j)) {
        Word w = rewrite(*ci);
        if (!(w == word_of_gen(i))) E.set_conj_inv(i, j, w);
      }
    }
  for (int s = 0; s < ls; ++s)
    if (diag[keep[s]] != 0) E.set_power(n + 1 + s, diag[keep[s]], Word());

  ConsistencyReport check = consistency_report(E);
  if (!check.consistent())
    throw InternalError("enforced presentation is still inconsistent");
  cov.E = std::move(E);
  return cov;
}

std::vector<Int> evaluate_in_cover(const ConsistentCover &cov, const ExprPtr &expr,
                                   const std::vector<ExponentVector> &symbols) {
  Collector c(cov.E);
  ExponentVector v = evaluate_symbol_expr(expr, symbols, c);
  if (!cov.in_tail_subgroup(v))
    throw InvalidArgument("relator value is not central: " +
                          std::string("nontrivial non-tail part"));
  return std::vector<Int>(v.begin() + cov.n_base, v.end());
}

PcPresentation central_quotient(const ConsistentCover &cov,
                                const std::vector<ExponentVector> &subgrp_gens,
                                const InducedSequence &ambient) {
  for (const auto &z : subgrp_gens)
    if (!cov.in_tail_subgroup(z))
      throw InvalidArgument("central quotient generator outside the tail subgroup");
  return quotient_by_central(ambient, subgrp_gens).pres;
}

} // namespace qpc
