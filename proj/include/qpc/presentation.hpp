#pragma once

#include "qpc/base.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qpc {

// Normal-form carrier: one exponent per generator, 0 <= a_i < e_i at
// power-indexed positions. The identity is the zero vector.
using ExponentVector = std::vector<Int>;

// A polycyclic presentation:
//   g_i^{e_i}          = power_rhs(i)            for i in I
//   g_i^{g_j}          = conj(i, j)              for j < i
//   g_i^{g_j^{-1}}     = conj_inv(i, j)          for j < i, j not in I (optional)
// Right-hand sides are words over generators of strictly larger index than
// the conjugator (resp. the powered generator). Values are immutable after
// construction; all operations over them are pure.
class PcPresentation {
public:
  PcPresentation() = default;
  explicit PcPresentation(int n_gens);

  int n() const { return n_; }
  const std::string &group_name() const { return group_name_; }
  void set_group_name(std::string s) { group_name_ = std::move(s); }

  const std::string &name(int i) const { return names_[i - 1]; }
  void set_name(int i, std::string s) { names_[i - 1] = std::move(s); }
  const std::vector<std::string> &names() const { return names_; }
  // -1 if unknown
  int gen_index(const std::string &name) const;

  bool has_power(int i) const { return has_power_[i - 1]; }
  const Int &exponent(int i) const { return exponents_[i - 1]; }
  const Word &power_rhs(int i) const { return power_rhs_[i - 1]; }
  void set_power(int i, Int e, Word rhs);
  void clear_power(int i);

  // Trivial (absent) entries mean g_i^{g_j} = g_i.
  bool has_conj(int i, int j) const;
  // Returns stored word, or the trivial word g_i.
  Word conj(int i, int j) const;
  void set_conj(int i, int j, Word rhs);

  bool has_conj_inv(int i, int j) const;
  std::optional<Word> conj_inv(int i, int j) const;
  void set_conj_inv(int i, int j, Word rhs);

  // Provenance (which construction produced which generator); emitted in the
  // JSON mirror, ignored everywhere else.
  const std::string &provenance(int i) const { return provenance_[i - 1]; }
  void set_provenance(int i, std::string s) { provenance_[i - 1] = std::move(s); }

  ExponentVector identity() const { return ExponentVector(n_, Int(0)); }
  bool is_identity(const ExponentVector &v) const;

  // Structural validation: index ordering of right-hand sides, e_i >= 1,
  // in-range generator indices. Throws InvalidArgument on violation.
  void validate() const;

  bool operator==(const PcPresentation &o) const;

private:
  int n_ = 0;
  std::string group_name_ = "G";
  std::vector<std::string> names_;
  std::vector<bool> has_power_;
  std::vector<Int> exponents_;
  std::vector<Word> power_rhs_;
  std::map<std::pair<int, int>, Word> conj_;
  std::map<std::pair<int, int>, Word> conj_inv_;
  std::vector<std::string> provenance_;
};

// One failed overlap test: the two collections of the same product and the
// normal form of lhs^{-1} * rhs.
struct ConsistencyViolation {
  std::string kind; // "assoc", "power-left", "power-right", "power-self", "inverse"
  int i = 0, j = 0, k = 0;
  ExponentVector lhs;
  ExponentVector rhs;
  ExponentVector discrepancy;
};

struct ConsistencyReport {
  std::vector<ConsistencyViolation> violations;
  bool consistent() const { return violations.empty(); }
};

} // namespace qpc
