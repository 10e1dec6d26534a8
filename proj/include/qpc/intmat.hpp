#pragma once

#include "qpc/base.hpp"

#include <optional>

namespace qpc {

// Dense matrix of arbitrary-precision integers.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : r_(rows), c_(cols), d_(size_t(rows) * cols, Int(0)) {}

  static IntMatrix identity(int n);
  static IntMatrix from_rows(const std::vector<std::vector<Int>> &rows);

  int rows() const { return r_; }
  int cols() const { return c_; }
  Int &at(int i, int j) { return d_[size_t(i) * c_ + j]; }
  const Int &at(int i, int j) const { return d_[size_t(i) * c_ + j]; }

  void swap_rows(int i, int j);
  void swap_cols(int i, int j);
  void negate_row(int i);
  void negate_col(int i);
  // row i += k * row j; col i += k * col j
  void add_row(int i, int j, const Int &k);
  void add_col(int i, int j, const Int &k);

  IntMatrix operator*(const IntMatrix &o) const;
  bool operator==(const IntMatrix &o) const {
    return r_ == o.r_ && c_ == o.c_ && d_ == o.d_;
  }
  bool is_zero() const;

  // |det| = 1; defined for square matrices only.
  bool is_unimodular() const;
  Int determinant() const;

private:
  int r_ = 0, c_ = 0;
  std::vector<Int> d_;
};

struct HermiteResult {
  IntMatrix h; // row Hermite form: pivots positive, entries above reduced
  IntMatrix u; // unimodular, u * m = h
};
HermiteResult hermite_normal_form(const IntMatrix &m);

struct SmithResult {
  IntMatrix d; // diagonal, d_1 | d_2 | ... >= 0
  IntMatrix p; // unimodular row transform
  IntMatrix q; // unimodular column transform; p * m * q = d
  std::vector<Int> diagonal() const;
};
SmithResult smith_normal_form(const IntMatrix &m);

// Invariant factors of Z^rank / row-space(rel); factors 1 dropped, 0 denotes
// an infinite factor. Finite factors come first in divisibility order.
std::vector<Int> abelian_invariants(const IntMatrix &rel, int ambient_rank);

// Affine congruence system x * b = rhs (mod moduli), solved over the integers:
// moduli[j] = 0 means an exact equation in column j. Returns a particular
// solution and a basis of the homogeneous solution lattice.
struct CongruenceSolution {
  std::vector<Int> particular;
  std::vector<std::vector<Int>> lattice;
};
std::optional<CongruenceSolution> solve_congruence(const IntMatrix &b,
                                                   const std::vector<Int> &rhs,
                                                   const std::vector<Int> &moduli);

// A finitely generated abelian group presented as Z^n / row-space(rel), with
// coordinates transported to the Smith basis where arithmetic is
// componentwise modulo the invariant orders (0 = infinite).
class AbelianStructure {
public:
  AbelianStructure() = default;
  AbelianStructure(int n_gens, const IntMatrix &relations);

  int rank() const { return n_; }
  // Orders of the Smith generators (1-factors dropped), 0 = infinite.
  const std::vector<Int> &orders() const { return orders_; }

  // Exponent vector over the original generators -> Smith coordinates.
  std::vector<Int> to_smith(const std::vector<Int> &raw) const;
  // Smith coordinates -> some representative exponent vector.
  std::vector<Int> from_smith(const std::vector<Int> &coords) const;
  std::vector<Int> reduce(std::vector<Int> coords) const;

private:
  int n_ = 0;
  std::vector<Int> orders_;
  std::vector<int> keep_;  // indices of surviving diagonal positions
  IntMatrix q_;            // column transform of the SNF
  IntMatrix qinv_;
};

IntMatrix matrix_inverse_unimodular(const IntMatrix &m);

} // namespace qpc
