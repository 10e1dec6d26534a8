#include "qpc/oracle.hpp"

#include "qpc/intmat.hpp"

#include <map>

namespace qpc {
namespace oracle {

MulTable enumerate(const PcPresentation &pres) {
  Int ord = 1;
  for (int i = 1; i <= pres.n(); ++i) {
    if (!pres.has_power(i))
      throw InvalidArgument("enumerate: presentation is not finite");
    ord *= pres.exponent(i);
    if (ord > 100000) throw InvalidArgument("enumerate: order exceeds 100000");
  }
  MulTable t;
  Collector c(pres);
  std::map<ExponentVector, int> index;
  ExponentVector x = pres.identity();
  for (;;) {
    index[x] = static_cast<int>(t.elements.size());
    t.elements.push_back(x);
    int pos = pres.n() - 1;
    while (pos >= 0) {
      x[pos] += 1;
      if (x[pos] < pres.exponent(pos + 1)) break;
      x[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  t.table.assign(t.size(), std::vector<int>(t.size(), 0));
  for (int a = 0; a < t.size(); ++a)
    for (int b = 0; b < t.size(); ++b) {
      auto it = index.find(c.mul(t.elements[a], t.elements[b]));
      if (it == index.end()) throw InternalError("product left the normal form set");
      t.table[a][b] = it->second;
    }
  for (int i = 1; i <= pres.n(); ++i) {
    ExponentVector g = pres.identity();
    g[i - 1] = 1;
    t.generator_index.push_back(index.at(c.collect(word_of_gen(i))));
    (void)g;
  }
  return t;
}

std::vector<int> brute_center(const MulTable &t) {
  std::vector<int> out;
  for (int z = 0; z < t.size(); ++z) {
    bool central = true;
    for (int x = 0; x < t.size() && central; ++x)
      central = t.table[z][x] == t.table[x][z];
    if (central) out.push_back(z);
  }
  return out;
}

std::vector<Int> abelian_tensor(const std::vector<Int> &inv_a,
                                const std::vector<Int> &inv_b) {
  std::vector<Int> factors;
  for (const Int &a : inv_a)
    for (const Int &b : inv_b) {
      Int g = gcd(a, b); // gcd(0, x) = x; gcd(0, 0) = 0 keeps free factors
      if (g != 1) factors.push_back(g);
    }
  if (factors.empty()) return {};
  IntMatrix diag(static_cast<int>(factors.size()), static_cast<int>(factors.size()));
  for (size_t i = 0; i < factors.size(); ++i)
    diag.at(static_cast<int>(i), static_cast<int>(i)) = factors[i];
  return abelian_invariants(diag, static_cast<int>(factors.size()));
}

std::vector<Int> cyclic_wedge(const Int &n, const Int &q) {
  if (n < 1 || q < 1) throw InvalidArgument("cyclic_wedge requires n >= 1, q >= 1");
  if (n == 1) return {};
  return {n};
}

} // namespace oracle
} // namespace qpc
