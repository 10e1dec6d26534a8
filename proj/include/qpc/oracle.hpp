#pragma once

#include "qpc/collect.hpp"

namespace qpc {

// Brute-force cross-checks, deliberately independent of the main pipeline.
namespace oracle {

struct MulTable {
  std::vector<ExponentVector> elements; // index 0 is the identity
  std::vector<std::vector<int>> table;  // table[a][b] = index of a*b
  std::vector<int> generator_index;     // indices of the generators

  int size() const { return static_cast<int>(elements.size()); }
};

// All normal forms with the full multiplication table. Rejects presentations
// that are not visibly finite of order <= 100000.
MulTable enumerate(const PcPresentation &pres);

// Exact center by definition, as element indices.
std::vector<int> brute_center(const MulTable &table);

// Invariant factors of A (x)_Z B from the factor lists (0 = free factor).
std::vector<Int> abelian_tensor(const std::vector<Int> &inv_a,
                                const std::vector<Int> &inv_b);

// C_n wedge^q C_n from the free presentation: <x^q>/<x^{nq}>; n >= 1, q >= 1.
std::vector<Int> cyclic_wedge(const Int &n, const Int &q);

} // namespace oracle
} // namespace qpc
