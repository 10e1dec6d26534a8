#include "qpc/intmat.hpp"

#include <algorithm>

namespace qpc {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>> &rows) {
  int r = static_cast<int>(rows.size());
  int c = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw InvalidArgument("ragged row list");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

void IntMatrix::swap_rows(int i, int j) {
  if (i == j) return;
  for (int k = 0; k < c_; ++k) std::swap(at(i, k), at(j, k));
}
void IntMatrix::swap_cols(int i, int j) {
  if (i == j) return;
  for (int k = 0; k < r_; ++k) std::swap(at(k, i), at(k, j));
}
void IntMatrix::negate_row(int i) {
  for (int k = 0; k < c_; ++k) at(i, k) = -at(i, k);
}
void IntMatrix::negate_col(int i) {
  for (int k = 0; k < r_; ++k) at(k, i) = -at(k, i);
}
void IntMatrix::add_row(int i, int j, const Int &k) {
  for (int t = 0; t < c_; ++t) at(i, t) += k * at(j, t);
}
void IntMatrix::add_col(int i, int j, const Int &k) {
  for (int t = 0; t < r_; ++t) at(t, i) += k * at(t, j);
}

IntMatrix IntMatrix::operator*(const IntMatrix &o) const {
  if (c_ != o.r_) throw InvalidArgument("dimension mismatch in matrix product");
  IntMatrix m(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      if (at(i, k) == 0) continue;
      for (int j = 0; j < o.c_; ++j) m.at(i, j) += at(i, k) * o.at(k, j);
    }
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(d_.begin(), d_.end(), [](const Int &x) { return x == 0; });
}

Int IntMatrix::determinant() const {
  if (r_ != c_) throw InvalidArgument("determinant of non-square matrix");
  // Fraction-free Gaussian elimination (Bareiss).
  IntMatrix a = *this;
  Int det = 1, prev = 1;
  int sign = 1;
  for (int k = 0; k < r_; ++k) {
    int piv = -1;
    for (int i = k; i < r_; ++i)
      if (a.at(i, k) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != k) {
      a.swap_rows(piv, k);
      sign = -sign;
    }
    for (int i = k + 1; i < r_; ++i) {
      for (int j = k + 1; j < c_; ++j) {
        Int v = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        a.at(i, j) = v / prev;
      }
      a.at(i, k) = 0;
    }
    prev = a.at(k, k);
  }
  det = a.at(r_ - 1, c_ - 1);
  return sign < 0 ? Int(-det) : det;
}

bool IntMatrix::is_unimodular() const {
  if (r_ != c_) return false;
  Int d = determinant();
  return d == 1 || d == -1;
}

HermiteResult hermite_normal_form(const IntMatrix &m) {
  HermiteResult res{m, IntMatrix::identity(m.rows())};
  IntMatrix &h = res.h;
  IntMatrix &u = res.u;
  int row = 0;
  for (int col = 0; col < h.cols() && row < h.rows(); ++col) {
    // Pick the nonzero pivot of smallest absolute value to limit growth.
    for (;;) {
      int piv = -1;
      for (int i = row; i < h.rows(); ++i) {
        if (h.at(i, col) == 0) continue;
        if (piv < 0 || mpz_cmpabs(h.at(i, col).get_mpz_t(), h.at(piv, col).get_mpz_t()) < 0)
          piv = i;
      }
      if (piv < 0) break;
      h.swap_rows(piv, row);
      u.swap_rows(piv, row);
      bool cleared = true;
      for (int i = row + 1; i < h.rows(); ++i) {
        if (h.at(i, col) == 0) continue;
        Int k = -fdiv(h.at(i, col), h.at(row, col));
        if (k != 0) {
          h.add_row(i, row, k);
          u.add_row(i, row, k);
        }
        if (h.at(i, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (h.at(row, col) == 0) continue;
    if (h.at(row, col) < 0) {
      h.negate_row(row);
      u.negate_row(row);
    }
    // Reduce the entries above the pivot.
    for (int i = 0; i < row; ++i) {
      Int k = -fdiv(h.at(i, col), h.at(row, col));
      if (k != 0) {
        h.add_row(i, row, k);
        u.add_row(i, row, k);
      }
    }
    ++row;
  }
  return res;
}

SmithResult smith_normal_form(const IntMatrix &m) {
  SmithResult res{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  IntMatrix &d = res.d;
  IntMatrix &p = res.p;
  IntMatrix &q = res.q;
  const int nmin = std::min(d.rows(), d.cols());

  for (int s = 0; s < nmin; ++s) {
    for (;;) {
      // Smallest nonzero |entry| in the trailing block.
      int pi = -1, pj = -1;
      for (int i = s; i < d.rows(); ++i)
        for (int j = s; j < d.cols(); ++j) {
          if (d.at(i, j) == 0) continue;
          if (pi < 0 ||
              mpz_cmpabs(d.at(i, j).get_mpz_t(), d.at(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) break; // trailing block zero
      d.swap_rows(pi, s);
      p.swap_rows(pi, s);
      d.swap_cols(pj, s);
      q.swap_cols(pj, s);

      bool dirty = false;
      for (int i = s + 1; i < d.rows(); ++i) {
        if (d.at(i, s) == 0) continue;
        Int k = -fdiv(d.at(i, s), d.at(s, s));
        d.add_row(i, s, k);
        p.add_row(i, s, k);
        if (d.at(i, s) != 0) dirty = true;
      }
      for (int j = s + 1; j < d.cols(); ++j) {
        if (d.at(s, j) == 0) continue;
        Int k = -fdiv(d.at(s, j), d.at(s, s));
        d.add_col(j, s, k);
        q.add_col(j, s, k);
        if (d.at(s, j) != 0) dirty = true;
      }
      if (dirty) continue;
      // Enforce the divisibility chain: fold in any non-multiple entry.
      bool fixed = true;
      for (int i = s + 1; i < d.rows() && fixed; ++i)
        for (int j = s + 1; j < d.cols() && fixed; ++j)
          if (fmod(d.at(i, j), d.at(s, s) < 0 ? Int(-d.at(s, s)) : d.at(s, s)) != 0) {
            d.add_row(s, i, Int(1));
            p.add_row(s, i, Int(1));
            fixed = false;
          }
      if (fixed) break;
    }
    if (s < nmin && d.at(s, s) < 0) {
      d.negate_row(s);
      p.negate_row(s);
    }
  }
  return res;
}

std::vector<Int> SmithResult::diagonal() const {
  std::vector<Int> out;
  int nmin = std::min(d.rows(), d.cols());
  for (int i = 0; i < nmin; ++i) out.push_back(d.at(i, i));
  return out;
}

std::vector<Int> abelian_invariants(const IntMatrix &rel, int ambient_rank) {
  if (rel.rows() > 0 && rel.cols() != ambient_rank)
    throw InvalidArgument("relation matrix column count must equal ambient rank");
  if (ambient_rank == 0) return {};
  IntMatrix m = rel;
  if (m.cols() != ambient_rank) m = IntMatrix(0, ambient_rank);
  SmithResult s = smith_normal_form(m);
  std::vector<Int> diag = s.diagonal();
  std::vector<Int> finite;
  int zeros = ambient_rank - static_cast<int>(diag.size());
  for (const Int &v : diag) {
    if (v == 0)
      ++zeros;
    else if (v != 1)
      finite.push_back(v);
  }
  std::vector<Int> out = finite;
  for (int i = 0; i < zeros; ++i) out.push_back(0);
  return out;
}

std::optional<CongruenceSolution> solve_congruence(const IntMatrix &b,
                                                   const std::vector<Int> &rhs,
                                                   const std::vector<Int> &moduli) {
  const int k = b.rows();
  const int c = b.cols();
  if (static_cast<int>(rhs.size()) != c || static_cast<int>(moduli.size()) != c)
    throw InvalidArgument("congruence dimensions do not match");
  // Unknowns (x, s): x*b + s*diag(moduli) = rhs. Stack into one matrix.
  IntMatrix a(k + c, c);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < c; ++j) a.at(i, j) = b.at(i, j);
  for (int j = 0; j < c; ++j) a.at(k + j, j) = moduli[j];

  SmithResult s = smith_normal_form(a);
  // y*a = rhs  <=>  (y p^{-1}) d = rhs q  with y = z p.
  std::vector<Int> rq(c, Int(0));
  for (int j = 0; j < c; ++j)
    for (int t = 0; t < c; ++t) rq[j] += rhs[t] * s.q.at(t, j);
  const int rows = k + c;
  std::vector<Int> z(rows, Int(0));
  int nmin = std::min(rows, c);
  for (int j = 0; j < c; ++j) {
    Int dj = j < nmin ? s.d.at(j, j) : Int(0);
    if (dj == 0) {
      if (rq[j] != 0) return std::nullopt;
    } else {
      if (fmod(rq[j], dj) != 0) return std::nullopt;
      if (j < rows) z[j] = rq[j] / dj;
    }
  }
  auto times_p = [&](const std::vector<Int> &v) {
    std::vector<Int> y(rows, Int(0));
    for (int j = 0; j < rows; ++j)
      for (int t = 0; t < rows; ++t) y[j] += v[t] * s.p.at(t, j);
    return y;
  };
  CongruenceSolution sol;
  std::vector<Int> y = times_p(z);
  sol.particular.assign(y.begin(), y.begin() + k);
  // Homogeneous lattice: z free where the diagonal vanishes.
  for (int i = 0; i < rows; ++i) {
    bool free_row = i >= nmin || s.d.at(i, i) == 0;
    if (!free_row) continue;
    std::vector<Int> e(rows, Int(0));
    e[i] = 1;
    std::vector<Int> h = times_p(e);
    std::vector<Int> x(h.begin(), h.begin() + k);
    if (std::any_of(x.begin(), x.end(), [](const Int &v) { return v != 0; }))
      sol.lattice.push_back(std::move(x));
  }
  return sol;
}

IntMatrix matrix_inverse_unimodular(const IntMatrix &m) {
  if (m.rows() != m.cols()) throw InvalidArgument("inverse of non-square matrix");
  HermiteResult h = hermite_normal_form(m);
  // For unimodular m the Hermite form is the identity and u is the inverse.
  if (!(h.h == IntMatrix::identity(m.rows())))
    throw InvalidArgument("matrix is not unimodular");
  return h.u;
}

AbelianStructure::AbelianStructure(int n_gens, const IntMatrix &relations)
    : n_(n_gens) {
  IntMatrix rel = relations;
  if (rel.cols() != n_gens) {
    if (rel.rows() != 0) throw InvalidArgument("relation width mismatch");
    rel = IntMatrix(0, n_gens);
  }
  SmithResult s = smith_normal_form(rel);
  q_ = s.q;
  qinv_ = matrix_inverse_unimodular(q_);
  std::vector<Int> diag = s.diagonal();
  diag.resize(n_gens, Int(0)); // missing diagonal entries are free
  for (int i = 0; i < n_gens; ++i) {
    if (diag[i] == 1) continue;
    keep_.push_back(i);
    orders_.push_back(diag[i]);
  }
}

std::vector<Int> AbelianStructure::to_smith(const std::vector<Int> &raw) const {
  if (static_cast<int>(raw.size()) != n_)
    throw InvalidArgument("coordinate length mismatch");
  std::vector<Int> full(n_, Int(0));
  for (int j = 0; j < n_; ++j)
    for (int t = 0; t < n_; ++t) full[j] += raw[t] * q_.at(t, j);
  std::vector<Int> out;
  out.reserve(keep_.size());
  for (size_t i = 0; i < keep_.size(); ++i) out.push_back(full[keep_[i]]);
  return reduce(std::move(out));
}

std::vector<Int> AbelianStructure::from_smith(const std::vector<Int> &coords) const {
  if (coords.size() != keep_.size())
    throw InvalidArgument("smith coordinate length mismatch");
  std::vector<Int> full(n_, Int(0));
  for (size_t i = 0; i < keep_.size(); ++i) full[keep_[i]] = coords[i];
  std::vector<Int> raw(n_, Int(0));
  for (int j = 0; j < n_; ++j)
    for (int t = 0; t < n_; ++t) raw[j] += full[t] * qinv_.at(t, j);
  return raw;
}

std::vector<Int> AbelianStructure::reduce(std::vector<Int> coords) const {
  for (size_t i = 0; i < coords.size(); ++i)
    if (orders_[i] != 0) coords[i] = fmod(coords[i], orders_[i]);
  return coords;
}

} // namespace qpc
