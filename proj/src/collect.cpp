#include "qpc/collect.hpp"

#include <algorithm>

namespace qpc {

Collector::Collector(const PcPresentation &p, long step_budget)
    : P(p), budget_(step_budget), conj_trivial_above_(p.n() + 1, true) {
  for (int j = 1; j <= P.n(); ++j) {
    for (int i = j + 1; i <= P.n(); ++i) {
      if (P.has_conj(i, j) && !(P.conj(i, j) == word_of_gen(i))) {
        conj_trivial_above_[j] = false;
        break;
      }
    }
  }
}

void Collector::bump() const {
  if (++steps_ > budget_)
    throw InternalError("collection step budget exceeded; presentation may be "
                        "malformed or instance too large");
}

int Collector::depth(const ExponentVector &v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return static_cast<int>(i) + 1;
  return 0;
}

Word Collector::to_word(const ExponentVector &v) const {
  Word w;
  for (int i = 1; i <= P.n(); ++i)
    if (v[i - 1] != 0) w.emplace_back(i, v[i - 1]);
  return w;
}

ExponentVector Collector::collect(const Word &w) const {
  ExponentVector a = P.identity();
  std::vector<Item> stack;
  Word r = free_reduce(w);
  for (auto it = r.rbegin(); it != r.rend(); ++it)
    stack.push_back(Item{word_of_gen(it->gen, it->exp), Int(1)});
  run(a, stack);
  return a;
}

ExponentVector Collector::mul(const ExponentVector &a, const Word &w) const {
  ExponentVector r = a;
  std::vector<Item> stack;
  Word rr = free_reduce(w);
  for (auto it = rr.rbegin(); it != rr.rend(); ++it)
    stack.push_back(Item{word_of_gen(it->gen, it->exp), Int(1)});
  run(r, stack);
  return r;
}

ExponentVector Collector::mul(const ExponentVector &a, const ExponentVector &b) const {
  return mul(a, to_word(b));
}

ExponentVector Collector::inverse(const ExponentVector &a) const {
  ExponentVector r = P.identity();
  Word w = to_word(a);
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    r = mul(r, word_of_gen(it->gen, -it->exp));
  return r;
}

ExponentVector Collector::power(const ExponentVector &a, const Int &k) const {
  if (k == 0) return P.identity();
  ExponentVector base = a;
  Int e = k;
  if (e < 0) {
    base = inverse(base);
    e = -e;
  }
  ExponentVector result = P.identity();
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = mul(result, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

ExponentVector Collector::conjugate(const ExponentVector &x,
                                    const ExponentVector &y) const {
  return mul(mul(inverse(y), x), y);
}

ExponentVector Collector::commutator(const ExponentVector &x,
                                     const ExponentVector &y) const {
  return mul(mul(mul(inverse(x), inverse(y)), x), y);
}

ExponentVector Collector::evaluate(const ExprPtr &e) const {
  switch (e->kind) {
  case Expr::Kind::Atom:
    return collect(e->atom);
  case Expr::Kind::Prod: {
    ExponentVector r = P.identity();
    for (const auto &p : e->args) r = mul(r, evaluate(p));
    return r;
  }
  case Expr::Kind::Pow:
    return power(evaluate(e->args[0]), e->exp);
  case Expr::Kind::Conj:
    return conjugate(evaluate(e->args[0]), evaluate(e->args[1]));
  case Expr::Kind::Comm:
    return commutator(evaluate(e->args[0]), evaluate(e->args[1]));
  }
  throw InternalError("unreachable expression kind");
}

void Collector::run(ExponentVector &a, std::vector<Item> &stack) const {
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (it.rep == 0 || it.w.empty()) continue;
    if (it.w.size() == 1 && it.rep == 1) {
      mul_gen_pow(a, it.w[0].gen, it.w[0].exp, stack);
      continue;
    }
    if (it.rep == 1) {
      for (auto lit = it.w.rbegin(); lit != it.w.rend(); ++lit)
        stack.push_back(Item{word_of_gen(lit->gen, lit->exp), Int(1)});
      continue;
    }
    // Large repeat counts are folded by binary powering instead of expansion.
    if (it.rep > 8 || it.rep < -8) {
      ExponentVector nf = collect(it.w);
      stack.push_back(Item{to_word(power(nf, it.rep)), Int(1)});
      continue;
    }
    Word body = it.rep < 0 ? word_inverse(it.w) : it.w;
    long reps = std::abs(static_cast<long>(it.rep.get_si()));
    for (long r = 0; r < reps; ++r)
      stack.push_back(Item{body, Int(1)});
  }
}

void Collector::mul_gen_pow(ExponentVector &a, int j, Int e,
                            std::vector<Item> &stack) const {
  bump();
  if (e == 0) return;
  bool tail = false;
  for (int k = j + 1; k <= P.n(); ++k)
    if (a[k - 1] != 0) {
      tail = true;
      break;
    }
  bool carries = P.has_power(j) &&
                 (a[j - 1] + e < 0 || a[j - 1] + e >= P.exponent(j)) &&
                 !P.power_rhs(j).empty();
  // a = P g_j^{x} T  ->  P g_j^{x+e} T^{g_j^e}; the tail stays in place only
  // when the conjugation is trivial and no carry word has to slot before it.
  if (tail && (!conj_trivial_above_[j] || carries)) {
    Word t;
    for (int k = j + 1; k <= P.n(); ++k) {
      if (a[k - 1] != 0) {
        t.emplace_back(k, a[k - 1]);
        a[k - 1] = 0;
      }
    }
    stack.push_back(Item{conjugate_tail_word(t, j, e), Int(1)});
  }
  a[j - 1] += e;
  if (P.has_power(j)) {
    const Int &ej = P.exponent(j);
    if (a[j - 1] < 0 || a[j - 1] >= ej) {
      Int q = fdiv(a[j - 1], ej);
      a[j - 1] -= q * ej;
      if (!P.power_rhs(j).empty())
        stack.push_back(Item{P.power_rhs(j), q});
    }
  }
}

Word Collector::conjugate_tail_word(const Word &t, int j, const Int &e) const {
  if (t.empty() || e == 0) return t;
  Int cnt = e;
  int m = automorphism_order(j);
  if (m > 0) {
    cnt = fmod(cnt, Int(m));
    if (cnt == 0) return t;
  }
  if (!cnt.fits_slong_p() || std::abs(cnt.get_si()) > 100000)
    throw InternalError("conjugation repeat budget exceeded");
  long reps = cnt.get_si();
  int sign = reps < 0 ? -1 : 1;
  reps = std::abs(reps);
  Word w = t;
  for (long r = 0; r < reps; ++r) w = conjugate_word_once(w, j, sign);
  return w;
}

Word Collector::conjugate_word_once(const Word &t, int j, int sign) const {
  // Substitute each letter by its conjugate and renormalize within the
  // subgroup <g_{j+1},...,g_n>.
  ExponentVector a = P.identity();
  std::vector<Item> stack;
  for (auto it = t.rbegin(); it != t.rend(); ++it)
    stack.push_back(Item{conjugate_of_generator(it->gen, j, sign), it->exp});
  run(a, stack);
  return to_word(a);
}

Word Collector::conjugate_of_generator(int i, int j, int sign) const {
  if (j >= i) throw InternalError("conjugator index must be below target");
  if (sign > 0) return P.conj(i, j);
  if (!P.has_conj(i, j)) return word_of_gen(i);
  if (auto w = P.conj_inv(i, j)) return *w;
  auto memo = cinv_memo_.find({i, j});
  if (memo != cinv_memo_.end()) return memo->second;
  Word res;
  if (P.has_power(j)) {
    // g_j^{-1} = g_j^{e_j - 1} rhs(j)^{-1}; conjugate stepwise.
    ExponentVector x = collect(word_of_gen(i));
    Int reps = P.exponent(j) - 1;
    if (!reps.fits_slong_p() || reps.get_si() > 100000)
      throw InternalError("inverse conjugation derivation budget exceeded");
    Word w = to_word(x);
    for (long r = 0; r < reps.get_si(); ++r) w = conjugate_word_once(w, j, +1);
    // Now conjugate by rhs(j)^{-1}: w ^ (u^{-1}) = u w u^{-1}.
    ExponentVector u = collect(P.power_rhs(j));
    ExponentVector val = mul(mul(u, collect(w)), inverse(u));
    res = to_word(val);
  } else {
    int m = automorphism_order(j);
    if (m == 0)
      throw InconsistentPresentation(
          "missing inverse conjugation relation for infinite generator " +
          P.name(j) + "; add a cinv declaration");
    Word w = word_of_gen(i);
    for (int r = 0; r < m - 1; ++r) w = conjugate_word_once(w, j, +1);
    res = w;
  }
  cinv_memo_[{i, j}] = res;
  return res;
}

int Collector::automorphism_order(int j) const {
  auto it = aut_order_memo_.find(j);
  if (it != aut_order_memo_.end()) return it->second;
  aut_order_memo_[j] = 0; // guard against reentry
  if (conj_trivial_above_[j]) {
    aut_order_memo_[j] = 1;
    return 1;
  }
  const int kMaxOrder = 64;
  std::vector<Word> img(P.n() + 1);
  for (int i = j + 1; i <= P.n(); ++i) img[i] = P.conj(i, j);
  for (int m = 1; m <= kMaxOrder; ++m) {
    bool ident = true;
    for (int i = j + 1; i <= P.n() && ident; ++i)
      ident = img[i] == word_of_gen(i);
    if (ident) {
      aut_order_memo_[j] = m;
      return m;
    }
    for (int i = j + 1; i <= P.n(); ++i)
      img[i] = conjugate_word_once(img[i], j, +1);
  }
  aut_order_memo_[j] = 0;
  return 0;
}

// ---------------------------------------------------------------------------

ConsistencyReport consistency_report(const PcPresentation &p, long step_budget) {
  Collector c(p, step_budget);
  ConsistencyReport rep;
  const int n = p.n();
  auto nf_gen = [&](int g) { return c.collect(word_of_gen(g)); };
  // Start of the central relation-free suffix (tails in a tailed
  // presentation). On that block lhs^{-1} rhs is plain coordinate
  // subtraction; collecting it inside an inconsistent presentation could
  // cancel the very defect being measured.
  int cs = n + 1;
  for (int s = n; s >= 1; --s) {
    bool central = !p.has_power(s) || p.power_rhs(s).empty();
    for (int j = 1; j < s && central; ++j)
      if (p.has_conj(s, j) && !(p.conj(s, j) == word_of_gen(s))) central = false;
    for (int i = s + 1; i <= n && central; ++i)
      if (p.has_conj(i, s) && !(p.conj(i, s) == word_of_gen(i))) central = false;
    if (!central) break;
    cs = s;
  }
  auto record = [&](const char *kind, int i, int j, int k,
                    const ExponentVector &lhs, const ExponentVector &rhs) {
    if (lhs == rhs) return;
    ConsistencyViolation v;
    v.kind = kind;
    v.i = i;
    v.j = j;
    v.k = k;
    v.lhs = lhs;
    v.rhs = rhs;
    bool prefix_equal = true;
    for (int a = 0; a < cs - 1 && prefix_equal; ++a)
      prefix_equal = lhs[a] == rhs[a];
    if (prefix_equal) {
      v.discrepancy = ExponentVector(n, Int(0));
      for (int a = cs - 1; a < n; ++a) {
        v.discrepancy[a] = rhs[a] - lhs[a];
        if (p.has_power(a + 1))
          v.discrepancy[a] = fmod(v.discrepancy[a], p.exponent(a + 1));
      }
    } else {
      v.discrepancy = c.mul(c.inverse(lhs), rhs);
    }
    rep.violations.push_back(std::move(v));
  };

  // Deterministic (k, j, i)-lexicographic order over the overlap families.
  for (int k = 1; k <= n; ++k) {
    for (int j = 1; j < k; ++j) {
      for (int i = 1; i < j; ++i) {
        // g_k (g_j g_i) vs (g_k g_j) g_i
        ExponentVector in = c.mul(nf_gen(j), word_of_gen(i));
        ExponentVector lhs = c.mul(nf_gen(k), in);
        ExponentVector rhs = c.mul(c.mul(nf_gen(k), word_of_gen(j)), word_of_gen(i));
        record("assoc", i, j, k, lhs, rhs);
      }
    }
  }
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i < j; ++i) {
      if (p.has_power(j)) {
        // g_j^{e_j} g_i vs g_j^{e_j-1} (g_j g_i)
        ExponentVector lhs = c.mul(c.collect(p.power_rhs(j)), word_of_gen(i));
        ExponentVector rhs = c.mul(c.power(nf_gen(j), p.exponent(j) - 1),
                                   c.mul(nf_gen(j), word_of_gen(i)));
        record("power-left", i, j, 0, lhs, rhs);
      }
      if (p.has_power(i)) {
        // g_j (g_i^{e_i}) vs (g_j g_i) g_i^{e_i-1}
        ExponentVector lhs = c.mul(nf_gen(j), c.collect(p.power_rhs(i)));
        ExponentVector rhs =
            c.mul(c.mul(nf_gen(j), word_of_gen(i)), c.power(nf_gen(i), p.exponent(i) - 1));
        record("power-right", i, j, 0, lhs, rhs);
      }
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (p.has_power(i)) {
      // g_i (g_i^{e_i}) vs (g_i^{e_i}) g_i
      ExponentVector lhs = c.mul(nf_gen(i), c.collect(p.power_rhs(i)));
      ExponentVector rhs = c.mul(c.collect(p.power_rhs(i)), word_of_gen(i));
      record("power-self", i, i, 0, lhs, rhs);
    }
  }
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i < j; ++i) {
      if (!p.has_power(i)) {
        // g_j vs (g_j g_i^{-1}) g_i
        ExponentVector lhs = nf_gen(j);
        ExponentVector rhs = c.mul(c.mul(nf_gen(j), word_of_gen(i, -1)), word_of_gen(i));
        record("inverse", i, j, 0, lhs, rhs);
      }
    }
  }
  return rep;
}

PcPresentation eliminate_trivial_generators(const PcPresentation &p,
                                            std::vector<int> *index_map) {
  PcPresentation cur = p;
  std::vector<int> map(p.n());
  for (int i = 0; i < p.n(); ++i) map[i] = i + 1;

  for (;;) {
    int dead = 0;
    for (int i = 1; i <= cur.n(); ++i)
      if (cur.has_power(i) && cur.exponent(i) == 1) {
        dead = i;
        break;
      }
    if (dead == 0) break;
    Word sub = cur.power_rhs(dead); // g_dead = sub
    auto rewrite = [&](const Word &w) {
      Word out;
      for (const Letter &l : w) {
        int g = l.gen > dead ? l.gen - 1 : l.gen;
        if (l.gen == dead) {
          if (l.exp >= 0) {
            for (Int r = 0; r < l.exp; ++r)
              for (const Letter &s : sub) out.emplace_back(s.gen - 1, s.exp);
          } else {
            Word inv = word_inverse(sub);
            for (Int r = 0; r < -l.exp; ++r)
              for (const Letter &s : inv) out.emplace_back(s.gen - 1, s.exp);
          }
        } else {
          out.emplace_back(g, l.exp);
        }
      }
      return free_reduce(out);
    };
    PcPresentation next(cur.n() - 1);
    next.set_group_name(cur.group_name());
    for (int i = 1; i <= cur.n(); ++i) {
      if (i == dead) continue;
      int ni = i > dead ? i - 1 : i;
      next.set_name(ni, cur.name(i));
      next.set_provenance(ni, cur.provenance(i));
      if (cur.has_power(i)) next.set_power(ni, cur.exponent(i), rewrite(cur.power_rhs(i)));
    }
    for (int i = 2; i <= cur.n(); ++i) {
      for (int j = 1; j < i; ++j) {
        if (i == dead || j == dead) continue;
        int ni = i > dead ? i - 1 : i, nj = j > dead ? j - 1 : j;
        if (cur.has_conj(i, j)) next.set_conj(ni, nj, rewrite(cur.conj(i, j)));
        if (auto w = cur.conj_inv(i, j)) next.set_conj_inv(ni, nj, rewrite(*w));
      }
    }
    for (int i = 0; i < p.n(); ++i) {
      if (map[i] == dead)
        map[i] = 0;
      else if (map[i] > dead)
        --map[i];
    }
    cur = std::move(next);
  }
  if (index_map) *index_map = map;
  return cur;
}

PcPresentation canonicalize_rhs(const PcPresentation &p) {
  Collector c(p);
  PcPresentation out = p;
  for (int i = 1; i <= p.n(); ++i)
    if (p.has_power(i))
      out.set_power(i, p.exponent(i), c.to_word(c.collect(p.power_rhs(i))));
  for (int i = 2; i <= p.n(); ++i) {
    for (int j = 1; j < i; ++j) {
      if (p.has_conj(i, j))
        out.set_conj(i, j, c.to_word(c.collect(p.conj(i, j))));
      if (auto w = p.conj_inv(i, j))
        out.set_conj_inv(i, j, c.to_word(c.collect(*w)));
    }
  }
  return out;
}

} // namespace qpc
