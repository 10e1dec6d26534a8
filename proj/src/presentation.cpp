#include "qpc/presentation.hpp"

#include <algorithm>

namespace qpc {

PcPresentation::PcPresentation(int n_gens)
    : n_(n_gens), names_(n_gens), has_power_(n_gens, false),
      exponents_(n_gens, Int(0)), power_rhs_(n_gens), provenance_(n_gens) {
  for (int i = 1; i <= n_; ++i) names_[i - 1] = "g" + std::to_string(i);
}

int PcPresentation::gen_index(const std::string &name) const {
  for (int i = 1; i <= n_; ++i)
    if (names_[i - 1] == name) return i;
  return -1;
}

void PcPresentation::set_power(int i, Int e, Word rhs) {
  if (i < 1 || i > n_) throw InvalidArgument("generator index out of range");
  if (e < 1) throw InvalidArgument("power exponent must be >= 1");
  has_power_[i - 1] = true;
  exponents_[i - 1] = std::move(e);
  power_rhs_[i - 1] = free_reduce(rhs);
}

void PcPresentation::clear_power(int i) {
  has_power_[i - 1] = false;
  exponents_[i - 1] = 0;
  power_rhs_[i - 1].clear();
}

bool PcPresentation::has_conj(int i, int j) const {
  return conj_.count({i, j}) != 0;
}

Word PcPresentation::conj(int i, int j) const {
  auto it = conj_.find({i, j});
  if (it != conj_.end()) return it->second;
  return word_of_gen(i);
}

void PcPresentation::set_conj(int i, int j, Word rhs) {
  if (!(1 <= j && j < i && i <= n_))
    throw InvalidArgument("conjugation requires j < i within range");
  conj_[{i, j}] = free_reduce(rhs);
}

bool PcPresentation::has_conj_inv(int i, int j) const {
  return conj_inv_.count({i, j}) != 0;
}

std::optional<Word> PcPresentation::conj_inv(int i, int j) const {
  auto it = conj_inv_.find({i, j});
  if (it != conj_inv_.end()) return it->second;
  return std::nullopt;
}

void PcPresentation::set_conj_inv(int i, int j, Word rhs) {
  if (!(1 <= j && j < i && i <= n_))
    throw InvalidArgument("conjugation requires j < i within range");
  conj_inv_[{i, j}] = free_reduce(rhs);
}

bool PcPresentation::is_identity(const ExponentVector &v) const {
  return std::all_of(v.begin(), v.end(), [](const Int &x) { return x == 0; });
}

namespace {
void check_word(const Word &w, int min_index_exclusive, int n,
                const char *what) {
  for (const Letter &l : w) {
    if (l.gen < 1 || l.gen > n)
      throw InvalidArgument(std::string(what) + ": generator index out of range");
    if (l.gen <= min_index_exclusive)
      throw InvalidArgument(std::string(what) +
                            ": right-hand side must use strictly larger indices");
    if (l.exp == 0)
      throw InvalidArgument(std::string(what) + ": zero exponent in word");
  }
}
} // namespace

void PcPresentation::validate() const {
  for (int i = 1; i <= n_; ++i) {
    if (has_power(i)) {
      if (exponent(i) < 1) throw InvalidArgument("power exponent must be >= 1");
      check_word(power_rhs(i), i, n_, "power relation");
    }
  }
  for (const auto &[key, w] : conj_) {
    auto [i, j] = key;
    if (!(1 <= j && j < i && i <= n_))
      throw InvalidArgument("conjugation indices out of order");
    check_word(w, j, n_, "conjugation relation");
  }
  for (const auto &[key, w] : conj_inv_) {
    auto [i, j] = key;
    if (!(1 <= j && j < i && i <= n_))
      throw InvalidArgument("inverse conjugation indices out of order");
    check_word(w, j, n_, "inverse conjugation relation");
  }
}

bool PcPresentation::operator==(const PcPresentation &o) const {
  return n_ == o.n_ && has_power_ == o.has_power_ && exponents_ == o.exponents_ &&
         power_rhs_ == o.power_rhs_ && conj_ == o.conj_ && conj_inv_ == o.conj_inv_;
}

} // namespace qpc
