#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qpc {

// Arbitrary-precision integer. Infinite polycyclic groups produce unbounded
// exponents, so all exponent arithmetic is done over mpz.
using Int = mpz_class;

inline Int int_from_string(const std::string &s) { return Int(s); }

// Floor division and the matching remainder (sign of divisor assumed > 0).
inline Int fdiv(const Int &a, const Int &b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline Int fmod(const Int &a, const Int &b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}
inline Int gcd(const Int &a, const Int &b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}
inline Int lcm(const Int &a, const Int &b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}
// g = gcd(a, b) = s*a + t*b
inline Int xgcd(const Int &a, const Int &b, Int &s, Int &t) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return g;
}

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps these onto exit codes.

struct ParseError : std::runtime_error {
  int line = 0, column = 0;
  ParseError(const std::string &msg, int line_ = 0, int col_ = 0)
      : std::runtime_error(msg), line(line_), column(col_) {}
};

// Input presentation failed a consistency requirement.
struct InconsistentPresentation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation strategy ran out of road (e.g. center on an instance the
// implemented strategies do not cover). Never a wrong answer.
struct UnsupportedInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal invariant check tripped; indicates a bug, not bad input.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Words over polycyclic generators.

// One syllable g_gen^exp; generator indices are 1-based, exponents nonzero.
struct Letter {
  int gen = 0;
  Int exp;
  Letter() = default;
  Letter(int g, Int e) : gen(g), exp(std::move(e)) {}
  bool operator==(const Letter &o) const { return gen == o.gen && exp == o.exp; }
};

using Word = std::vector<Letter>;

// Merge adjacent syllables with the same generator, drop zero exponents.
inline Word free_reduce(const Word &w) {
  Word out;
  for (const Letter &l : w) {
    if (l.exp == 0) continue;
    if (!out.empty() && out.back().gen == l.gen) {
      out.back().exp += l.exp;
      if (out.back().exp == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

inline Word word_inverse(const Word &w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.emplace_back(it->gen, -it->exp);
  return out;
}

inline Word word_concat(const Word &a, const Word &b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(out);
}

inline Word word_of_gen(int g, Int e = 1) {
  Word w;
  if (e != 0) w.emplace_back(g, std::move(e));
  return w;
}

// ---------------------------------------------------------------------------
// Word expressions: products, inverses, integer powers, conjugations u^v and
// commutators [u,v]. Every relator downstream is phrased this way.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Atom, Prod, Pow, Conj, Comm };
  Kind kind = Kind::Atom;
  Word atom;                 // Kind::Atom
  std::vector<ExprPtr> args; // operands
  Int exp;                   // Kind::Pow

  static ExprPtr make_atom(Word w) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Atom;
    e->atom = std::move(w);
    return e;
  }
  static ExprPtr make_gen(int g, Int k = 1) { return make_atom(word_of_gen(g, std::move(k))); }
  static ExprPtr make_prod(std::vector<ExprPtr> parts) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Prod;
    e->args = std::move(parts);
    return e;
  }
  static ExprPtr make_prod(ExprPtr a, ExprPtr b) {
    return make_prod(std::vector<ExprPtr>{std::move(a), std::move(b)});
  }
  static ExprPtr make_pow(ExprPtr base, Int k) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Pow;
    e->args = {std::move(base)};
    e->exp = std::move(k);
    return e;
  }
  static ExprPtr make_inv(ExprPtr base) { return make_pow(std::move(base), Int(-1)); }
  static ExprPtr make_conj(ExprPtr x, ExprPtr by) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Conj;
    e->args = {std::move(x), std::move(by)};
    return e;
  }
  static ExprPtr make_comm(ExprPtr x, ExprPtr y) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Comm;
    e->args = {std::move(x), std::move(y)};
    return e;
  }
};

} // namespace qpc
