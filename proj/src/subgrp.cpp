#include "qpc/subgrp.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace qpc {

namespace {

Int relative_order_at(const PcPresentation &p, int depth) {
  return p.has_power(depth) ? p.exponent(depth) : Int(0);
}

} // namespace

std::optional<std::vector<Int>> InducedSequence::express(const ExponentVector &x) const {
  Collector c(*parent_);
  ExponentVector cur = x;
  std::vector<Int> coords(members_.size(), Int(0));
  for (size_t k = 0; k < members_.size(); ++k) {
    int d = Collector::depth(cur);
    if (d == 0) break;
    if (d < members_[k].depth) return std::nullopt;
    if (d > members_[k].depth) continue;
    const Int &alpha = cur[d - 1];
    if (fmod(alpha, members_[k].leading) != 0) return std::nullopt;
    Int q = alpha / members_[k].leading;
    cur = c.mul(c.power(members_[k].nf, -q), cur);
    coords[k] = q;
  }
  if (Collector::depth(cur) != 0) return std::nullopt;
  return coords;
}

ExponentVector InducedSequence::element(const std::vector<Int> &coords) const {
  Collector c(*parent_);
  ExponentVector r = parent_->identity();
  for (size_t k = 0; k < members_.size(); ++k)
    r = c.mul(r, c.power(members_[k].nf, coords[k]));
  return r;
}

Int InducedSequence::order() const {
  Int o = 1;
  for (const auto &m : members_) {
    Int e = relative_order_at(*parent_, m.depth);
    if (e == 0) return 0;
    o *= e / m.leading;
  }
  return o;
}

bool InducedSequence::is_whole_group() const {
  if (static_cast<int>(members_.size()) != parent_->n()) return false;
  for (int k = 0; k < parent_->n(); ++k)
    if (members_[k].depth != k + 1 || members_[k].leading != 1) return false;
  return true;
}

ExponentVector evaluate_symbol_expr(const ExprPtr &e,
                                    const std::vector<ExponentVector> &symbols,
                                    const Collector &c) {
  if (!e) throw InternalError("definition was not tracked");
  switch (e->kind) {
  case Expr::Kind::Atom: {
    ExponentVector r = c.presentation().identity();
    for (const Letter &l : e->atom) {
      if (l.gen < 1 || l.gen > static_cast<int>(symbols.size()))
        throw InternalError("symbol index out of range in definition");
      r = c.mul(r, c.power(symbols[l.gen - 1], l.exp));
    }
    return r;
  }
  case Expr::Kind::Prod: {
    ExponentVector r = c.presentation().identity();
    for (const auto &p : e->args) r = c.mul(r, evaluate_symbol_expr(p, symbols, c));
    return r;
  }
  case Expr::Kind::Pow:
    return c.power(evaluate_symbol_expr(e->args[0], symbols, c), e->exp);
  case Expr::Kind::Conj:
    return c.conjugate(evaluate_symbol_expr(e->args[0], symbols, c),
                       evaluate_symbol_expr(e->args[1], symbols, c));
  case Expr::Kind::Comm:
    return c.commutator(evaluate_symbol_expr(e->args[0], symbols, c),
                        evaluate_symbol_expr(e->args[1], symbols, c));
  }
  throw InternalError("unreachable expression kind");
}

// ---------------------------------------------------------------------------

namespace {

struct Entry {
  ExponentVector nf;
  ExprPtr def;
};

struct Builder {
  const PcPresentation &P;
  Collector c;
  bool track;
  std::vector<ExponentVector> closers;
  std::map<int, IgsMember> members; // keyed by depth
  std::deque<Entry> queue;
  long rounds = 0;

  Builder(const PcPresentation &p, const IgsOptions &opts)
      : P(p), c(p, opts.step_budget), track(opts.track_words) {
    for (const auto &x : opts.normal_closure_by) {
      closers.push_back(x);
      closers.push_back(c.inverse(x));
    }
    if (track && !closers.empty())
      throw InternalError("word tracking is not defined under normal closure");
  }

  void push(ExponentVector nf, ExprPtr def) {
    if (Collector::depth(nf) == 0) return;
    queue.push_back(Entry{std::move(nf), track ? std::move(def) : nullptr});
  }

  void enqueue_closure(int depth) {
    const IgsMember &m = members.at(depth);
    Int rel = relative_order_at(P, depth);
    if (rel != 0)
      push(c.power(m.nf, rel / m.leading),
           track ? Expr::make_pow(m.definition, rel / m.leading) : nullptr);
    for (auto &[d2, m2] : members) {
      if (d2 == depth) continue;
      push(c.conjugate(m.nf, m2.nf),
           track ? Expr::make_conj(m.definition, m2.definition) : nullptr);
      push(c.conjugate(m.nf, c.inverse(m2.nf)),
           track ? Expr::make_conj(m.definition, Expr::make_inv(m2.definition))
                 : nullptr);
      push(c.conjugate(m2.nf, m.nf),
           track ? Expr::make_conj(m2.definition, m.definition) : nullptr);
      push(c.conjugate(m2.nf, c.inverse(m.nf)),
           track ? Expr::make_conj(m2.definition, Expr::make_inv(m.definition))
                 : nullptr);
    }
    for (const auto &y : closers) push(c.conjugate(m.nf, y), nullptr);
  }

  void insert(int depth, ExponentVector nf, Int leading, ExprPtr def) {
    IgsMember m;
    m.nf = std::move(nf);
    m.depth = depth;
    m.leading = std::move(leading);
    m.definition = std::move(def);
    members[depth] = std::move(m);
    enqueue_closure(depth);
  }

  void sift(ExponentVector x, ExprPtr def) {
    for (;;) {
      int d = Collector::depth(x);
      if (d == 0) return;
      Int alpha = x[d - 1];
      if (!P.has_power(d) && alpha < 0) {
        x = c.inverse(x);
        if (track) def = Expr::make_inv(def);
        alpha = x[d - 1];
      }
      auto it = members.find(d);
      if (it != members.end()) {
        IgsMember &m = it->second;
        if (fmod(alpha, m.leading) == 0) {
          Int q = alpha / m.leading;
          x = c.mul(c.power(m.nf, -q), x);
          if (track)
            def = Expr::make_prod(Expr::make_pow(m.definition, -q), def);
          continue;
        }
        Int a, b;
        Int g = xgcd(m.leading, alpha, a, b);
        ExponentVector y = c.mul(c.power(m.nf, a), c.power(x, b));
        ExprPtr ydef = track ? Expr::make_prod(Expr::make_pow(m.definition, a),
                                               Expr::make_pow(def, b))
                             : nullptr;
        if (Collector::depth(y) != d || y[d - 1] != g)
          throw InternalError("gcd update lost its leading term");
        IgsMember old = m;
        m.nf = std::move(y);
        m.leading = g;
        m.definition = ydef;
        push(old.nf, old.definition);
        push(x, def);
        enqueue_closure(d);
        return;
      }
      Int rel = relative_order_at(P, d);
      if (rel != 0) {
        Int g = gcd(alpha, rel);
        if (g != alpha) {
          Int a, b;
          xgcd(alpha, rel, a, b);
          ExponentVector y = c.power(x, a);
          ExprPtr ydef = track ? Expr::make_pow(def, a) : nullptr;
          if (Collector::depth(y) != d || y[d - 1] != g)
            throw InternalError("power update lost its leading term");
          insert(d, std::move(y), g, std::move(ydef));
          push(x, def);
          return;
        }
      }
      insert(d, std::move(x), alpha, std::move(def));
      return;
    }
  }

  void drain() {
    while (!queue.empty()) {
      if (++rounds > 2'000'000)
        throw InternalError("induced sequence closure did not stabilize");
      Entry e = std::move(queue.front());
      queue.pop_front();
      sift(std::move(e.nf), std::move(e.def));
    }
  }

  std::vector<IgsMember> snapshot() const {
    std::vector<IgsMember> out;
    for (const auto &[d, m] : members) out.push_back(m);
    return out;
  }

  std::vector<IgsMember> finish() {
    drain();
    // Everything the closure produces must now sift to the identity; retry a
    // few rounds if a replacement invalidated earlier reductions.
    for (int round = 0;; ++round) {
      InducedSequence probe(P, snapshot());
      std::vector<Entry> missing;
      for (auto &[d, m] : members) {
        Int rel = relative_order_at(P, d);
        if (rel != 0) {
          ExponentVector pw = c.power(m.nf, rel / m.leading);
          if (!probe.contains(pw))
            missing.push_back(
                {pw, track ? Expr::make_pow(m.definition, rel / m.leading) : nullptr});
        }
        for (auto &[d2, m2] : members) {
          if (d2 == d) continue;
          for (int sign : {+1, -1}) {
            ExponentVector cj =
                c.conjugate(m.nf, sign > 0 ? m2.nf : c.inverse(m2.nf));
            if (!probe.contains(cj))
              missing.push_back(
                  {cj, track ? Expr::make_conj(m.definition,
                                               sign > 0
                                                   ? m2.definition
                                                   : Expr::make_inv(m2.definition))
                             : nullptr});
          }
        }
        for (const auto &y : closers) {
          ExponentVector cj = c.conjugate(m.nf, y);
          if (!probe.contains(cj)) missing.push_back({cj, nullptr});
        }
      }
      if (missing.empty()) break;
      if (round >= 64) throw InternalError("induced sequence verification failed");
      for (auto &e : missing) push(std::move(e.nf), std::move(e.def));
      drain();
    }
    // Hermite pass: reduce entries above the diagonal for canonicity.
    std::vector<int> depths;
    for (auto &[d, m] : members) depths.push_back(d);
    for (size_t ki = 0; ki < depths.size(); ++ki) {
      for (size_t kj = ki + 1; kj < depths.size(); ++kj) {
        IgsMember &mk = members.at(depths[ki]);
        IgsMember &mj = members.at(depths[kj]);
        Int t = fdiv(mk.nf[mj.depth - 1], mj.leading);
        if (t != 0) {
          mk.nf = c.mul(mk.nf, c.power(mj.nf, -t));
          if (track)
            mk.definition = Expr::make_prod(mk.definition,
                                            Expr::make_pow(mj.definition, -t));
        }
      }
    }
    return snapshot();
  }
};

} // namespace

InducedSequence induced_sequence(const PcPresentation &parent,
                                 const std::vector<ExponentVector> &gens,
                                 const IgsOptions &opts) {
  Builder b(parent, opts);
  for (size_t i = 0; i < gens.size(); ++i)
    b.push(gens[i], opts.track_words ? Expr::make_gen(static_cast<int>(i) + 1)
                                     : nullptr);
  return InducedSequence(parent, b.finish());
}

PcPresentation subgroup_presentation(const InducedSequence &seq) {
  const PcPresentation &P = seq.parent();
  Collector c(P);
  const auto &ms = seq.members();
  int r = seq.size();
  PcPresentation out(r);
  out.set_group_name(P.group_name() + "_sub");
  auto expressed_word = [&](const ExponentVector &x, int min_index) {
    auto coords = seq.express(x);
    if (!coords)
      throw InternalError("subgroup presentation: closure element escaped the sequence");
    Word w;
    for (int k = 0; k < r; ++k) {
      if ((*coords)[k] == 0) continue;
      if (k + 1 <= min_index)
        throw InternalError("subgroup presentation: relation reaches below its depth");
      w.emplace_back(k + 1, (*coords)[k]);
    }
    return w;
  };
  for (int k = 1; k <= r; ++k) {
    const IgsMember &m = ms[k - 1];
    out.set_provenance(k, "member at depth " + std::to_string(m.depth));
    Int rel = relative_order_at(P, m.depth);
    if (rel != 0) {
      Int e = rel / m.leading;
      out.set_power(k, e, expressed_word(c.power(m.nf, e), k));
    }
  }
  for (int i = 2; i <= r; ++i) {
    for (int j = 1; j < i; ++j) {
      // Stored even when trivial: these are defining relators of the subgroup
      // presentation and later constructions attach tails to them.
      Word w = expressed_word(c.conjugate(ms[i - 1].nf, ms[j - 1].nf), j);
      out.set_conj(i, j, w);
      if (!out.has_power(j)) {
        Word wi = expressed_word(c.conjugate(ms[i - 1].nf, c.inverse(ms[j - 1].nf)), j);
        if (!(wi == word_of_gen(i))) out.set_conj_inv(i, j, wi);
      }
    }
  }
  return out;
}

InducedSequence tail_intersection(const InducedSequence &seq, int first_tail_depth) {
  if (first_tail_depth < 1 || first_tail_depth > seq.parent().n() + 1)
    throw InvalidArgument("tail depth out of range");
  std::vector<IgsMember> out;
  for (const auto &m : seq.members())
    if (m.depth >= first_tail_depth) out.push_back(m);
  return InducedSequence(seq.parent_ptr(), std::move(out));
}

// ---------------------------------------------------------------------------
// Center.

namespace {

bool is_abelian_presentation(const PcPresentation &p, Collector &c) {
  for (int i = 2; i <= p.n(); ++i)
    for (int j = 1; j < i; ++j)
      if (c.collect(p.conj(i, j)) != c.collect(word_of_gen(i))) return false;
  return true;
}

InducedSequence whole_group_sequence(const PcPresentation &p) {
  std::vector<IgsMember> ms;
  for (int i = 1; i <= p.n(); ++i) {
    IgsMember m;
    m.nf = p.identity();
    m.nf[i - 1] = 1;
    m.depth = i;
    m.leading = 1;
    ms.push_back(std::move(m));
  }
  return InducedSequence(p, std::move(ms));
}

// Smallest m such that <g_m..g_n> is abelian and invariant under conjugation
// both ways; n+1 when only the empty suffix qualifies.
int abelian_normal_suffix(const PcPresentation &p, Collector &c) {
  int n = p.n();
  auto gen_nf = [&](int g) { return c.collect(word_of_gen(g)); };
  for (int m = 1; m <= n; ++m) {
    bool ok = true;
    for (int j = m; j <= n && ok; ++j)
      for (int i = j + 1; i <= n && ok; ++i)
        if (c.collect(p.conj(i, j)) != gen_nf(i)) ok = false;
    for (int j = 1; j < m && ok; ++j) {
      for (int i = std::max(j + 1, m); i <= n && ok; ++i) {
        int d = Collector::depth(c.collect(p.conj(i, j)));
        if (d != 0 && d < m) ok = false;
        if (ok) {
          try {
            ExponentVector inv = c.conjugate(gen_nf(i), c.inverse(gen_nf(j)));
            int di = Collector::depth(inv);
            if (di != 0 && di < m) ok = false;
          } catch (const InconsistentPresentation &) {
            ok = false;
          }
        }
      }
    }
    if (ok) return m;
  }
  return n + 1;
}

std::optional<InducedSequence> center_by_suffix(const PcPresentation &p, Collector &c) {
  const int n = p.n();
  int m = abelian_normal_suffix(p, c);
  if (m > n) return std::nullopt;
  Int qorder = 1;
  for (int j = 1; j < m; ++j) {
    if (!p.has_power(j)) return std::nullopt;
    qorder *= p.exponent(j);
    if (qorder > 200000) return std::nullopt;
  }
  const int na = n - m + 1;
  // A = Z^na modulo suffix power relations, carried in Smith coordinates.
  std::vector<std::vector<Int>> rel_rows;
  for (int i = m; i <= n; ++i) {
    if (!p.has_power(i)) continue;
    std::vector<Int> row(na, Int(0));
    row[i - m] = p.exponent(i);
    ExponentVector rhs = c.collect(p.power_rhs(i));
    for (int t = m; t <= n; ++t) row[t - m] -= rhs[t - 1];
    rel_rows.push_back(std::move(row));
  }
  IntMatrix rel =
      rel_rows.empty() ? IntMatrix(0, na) : IntMatrix::from_rows(rel_rows);
  AbelianStructure A(na, rel);
  const int t = static_cast<int>(A.orders().size());

  auto suffix_coords = [&](const ExponentVector &x) {
    std::vector<Int> raw(na);
    for (int i = 0; i < na; ++i) raw[i] = x[m - 1 + i];
    return A.to_smith(raw);
  };
  auto realize = [&](const std::vector<Int> &smith) {
    std::vector<Int> raw = A.from_smith(smith);
    Word w;
    for (int i = 0; i < na; ++i)
      if (raw[i] != 0) w.emplace_back(m + i, raw[i]);
    return c.collect(w);
  };
  auto gen_nf = [&](int g) { return c.collect(word_of_gen(g)); };

  // Conjugation action of each generator on A.
  std::vector<IntMatrix> action(n + 1);
  for (int j = 1; j <= n; ++j) {
    if (j >= m) {
      action[j] = IntMatrix::identity(t);
      continue;
    }
    IntMatrix M(t, t);
    for (int i = 0; i < t; ++i) {
      std::vector<Int> e(t, Int(0));
      e[i] = 1;
      ExponentVector img = c.conjugate(realize(e), gen_nf(j));
      int d = Collector::depth(img);
      if (d != 0 && d < m)
        throw InternalError("suffix is not invariant under conjugation");
      std::vector<Int> row = suffix_coords(img);
      for (int k = 0; k < t; ++k) M.at(i, k) = row[k];
    }
    action[j] = std::move(M);
  }
  IntMatrix B(t, n * t);
  std::vector<Int> moduli(n * t, Int(0));
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i < t; ++i)
      for (int k = 0; k < t; ++k) {
        B.at(i, (j - 1) * t + k) = action[j].at(i, k) - (i == k ? 1 : 0);
        moduli[(j - 1) * t + k] = A.orders()[k];
      }

  std::vector<ExponentVector> center_gens;
  std::vector<std::vector<Int>> lattice;
  bool have_lattice = false;
  std::vector<Int> tuple(m - 1, Int(0));
  for (;;) {
    Word uw;
    for (int j = 0; j < m - 1; ++j)
      if (tuple[j] != 0) uw.emplace_back(j + 1, tuple[j]);
    ExponentVector u = c.collect(uw);
    bool viable = true;
    std::vector<Int> rhs(n * t, Int(0));
    for (int j = 1; j <= n && viable; ++j) {
      ExponentVector comm = c.commutator(u, gen_nf(j));
      int d = Collector::depth(comm);
      if (d != 0 && d < m) {
        viable = false;
        break;
      }
      if (t == 0) {
        if (d != 0) viable = false;
      } else {
        std::vector<Int> cs = suffix_coords(comm);
        for (int k = 0; k < t; ++k) rhs[(j - 1) * t + k] = -cs[k];
      }
    }
    if (viable) {
      auto sol = solve_congruence(B, rhs, moduli);
      if (sol) {
        center_gens.push_back(c.mul(u, realize(sol->particular)));
        if (!have_lattice) {
          lattice = sol->lattice;
          have_lattice = true;
        }
      }
    }
    int pos = m - 2;
    while (pos >= 0) {
      tuple[pos] += 1;
      if (tuple[pos] < p.exponent(pos + 1)) break;
      tuple[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  for (const auto &h : lattice) center_gens.push_back(realize(h));
  return induced_sequence(p, center_gens);
}

std::optional<InducedSequence> center_by_enumeration(const PcPresentation &p,
                                                     Collector &c) {
  Int order = 1;
  for (int i = 1; i <= p.n(); ++i) {
    if (!p.has_power(i)) return std::nullopt;
    order *= p.exponent(i);
    if (order > 100000) return std::nullopt;
  }
  std::vector<ExponentVector> gens;
  for (int i = 1; i <= p.n(); ++i) gens.push_back(c.collect(word_of_gen(i)));
  std::vector<ExponentVector> found;
  ExponentVector x = p.identity();
  for (;;) {
    bool central = true;
    for (const auto &g : gens)
      if (c.mul(x, g) != c.mul(g, x)) {
        central = false;
        break;
      }
    if (central) found.push_back(x);
    int pos = p.n() - 1;
    while (pos >= 0) {
      x[pos] += 1;
      if (x[pos] < p.exponent(pos + 1)) break;
      x[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return induced_sequence(p, found);
}

} // namespace

InducedSequence center(const PcPresentation &pres) {
  Collector c(pres);
  if (is_abelian_presentation(pres, c)) return whole_group_sequence(pres);
  if (auto z = center_by_suffix(pres, c)) return *z;
  if (auto z = center_by_enumeration(pres, c)) return *z;
  throw UnsupportedInstance(
      "center: no implemented strategy applies to this presentation");
}

// ---------------------------------------------------------------------------
// Central quotients.

CentralQuotient quotient_by_central(const InducedSequence &ambient,
                                    const std::vector<ExponentVector> &zgens) {
  auto presHptr = std::make_shared<PcPresentation>(subgroup_presentation(ambient));
  Collector ch(*presHptr);
  const int r = presHptr->n();

  std::vector<ExponentVector> zimg;
  for (const auto &z : zgens) {
    auto coords = ambient.express(z);
    if (!coords)
      throw InvalidArgument("central quotient: generator outside the ambient subgroup");
    zimg.emplace_back(coords->begin(), coords->end());
  }
  auto Zseq = std::make_shared<InducedSequence>(induced_sequence(*presHptr, zimg));
  for (const auto &zm : Zseq->members())
    for (int g = 1; g <= r; ++g)
      if (Collector::depth(ch.commutator(zm.nf, ch.collect(word_of_gen(g)))) != 0)
        throw InvalidArgument("central quotient: subgroup is not central");

  auto reduce_mod_z = [presHptr, Zseq](const ExponentVector &x) {
    Collector c2(*presHptr);
    ExponentVector cur = x;
    for (const auto &zm : Zseq->members()) {
      Int t = fdiv(cur[zm.depth - 1], zm.leading);
      if (t != 0) cur = c2.mul(c2.power(zm.nf, -t), cur);
    }
    return cur;
  };

  std::map<int, const IgsMember *> zat;
  for (const auto &zm : Zseq->members()) zat[zm.depth] = &zm;

  auto her = [&](const ExponentVector &v, int min_index) {
    Word w;
    for (int k = 1; k <= r; ++k) {
      if (v[k - 1] == 0) continue;
      if (k <= min_index)
        throw InternalError("central quotient: relation reaches below its depth");
      w.emplace_back(k, v[k - 1]);
    }
    return w;
  };

  PcPresentation q0(r);
  q0.set_group_name(presHptr->group_name() + "_q");
  for (int d = 1; d <= r; ++d) {
    q0.set_name(d, presHptr->name(d));
    q0.set_provenance(d, presHptr->provenance(d));
    auto zp = zat.find(d);
    if (zp != zat.end()) {
      ExponentVector gd = presHptr->identity();
      gd[d - 1] = 1;
      ExponentVector rhs = reduce_mod_z(ch.power(gd, zp->second->leading));
      q0.set_power(d, zp->second->leading, her(rhs, d));
    } else if (presHptr->has_power(d)) {
      ExponentVector rhs = reduce_mod_z(ch.collect(presHptr->power_rhs(d)));
      q0.set_power(d, presHptr->exponent(d), her(rhs, d));
    }
  }
  for (int i = 2; i <= r; ++i) {
    for (int j = 1; j < i; ++j) {
      ExponentVector rhs = reduce_mod_z(ch.collect(presHptr->conj(i, j)));
      Word w = her(rhs, j);
      if (!(w == word_of_gen(i))) q0.set_conj(i, j, w);
      if (!q0.has_power(j)) {
        if (auto ci = presHptr->conj_inv(i, j)) {
          Word wi = her(reduce_mod_z(ch.collect(*ci)), j);
          if (!(wi == word_of_gen(i))) q0.set_conj_inv(i, j, wi);
        }
      }
    }
  }

  std::vector<int> index_map;
  PcPresentation final_pres =
      canonicalize_rhs(eliminate_trivial_generators(q0, &index_map));
  auto finalptr = std::make_shared<PcPresentation>(std::move(final_pres));
  auto q0ptr = std::make_shared<PcPresentation>(std::move(q0));
  auto ambientptr = std::make_shared<InducedSequence>(ambient);
  auto imap = std::make_shared<std::vector<int>>(std::move(index_map));

  CentralQuotient out;
  out.pres = *finalptr;
  for (int k = 1; k <= r; ++k)
    if ((*imap)[k - 1] != 0) out.source_index.push_back(k);
  out.image_of = [presHptr, q0ptr, finalptr, ambientptr, reduce_mod_z,
                  imap](const ExponentVector &x) {
    auto coords = ambientptr->express(x);
    if (!coords)
      throw InvalidArgument("central quotient image: element outside the ambient subgroup");
    ExponentVector v(coords->begin(), coords->end());
    v = reduce_mod_z(v);
    Collector cq(*q0ptr);
    Word w;
    for (size_t k = 0; k < v.size(); ++k)
      if (v[k] != 0) w.emplace_back(static_cast<int>(k) + 1, v[k]);
    ExponentVector q0v = cq.collect(w);
    ExponentVector fin = finalptr->identity();
    for (size_t k = 0; k < q0v.size(); ++k) {
      int ni = (*imap)[k];
      if (q0v[k] != 0) {
        if (ni == 0) throw InternalError("eliminated generator carries residue");
        fin[ni - 1] = q0v[k];
      }
    }
    return fin;
  };
  return out;
}

} // namespace qpc
