#pragma once

#include "qpc/presentation.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qpc {

// Surviving tail metadata attached to serialized covers.
struct TailInfo {
  std::string name;
  Int order; // 0 = infinite
};

struct ParsedDocument {
  PcPresentation presentation;
  std::vector<TailInfo> tails; // empty unless a `tails` line was present
};

// Accepts the line-based text format or its JSON mirror (autodetected on the
// first non-space character).
ParsedDocument parse_presentation(const std::string &text);

std::string emit_text(const PcPresentation &p,
                      const std::vector<TailInfo> &tails = {});
std::string emit_json(const PcPresentation &p,
                      const std::vector<TailInfo> &tails = {},
                      bool with_provenance = true);

// Word over the named generators of p, e.g. "g1*g2^-2".
Word parse_word(const PcPresentation &p, const std::string &text);

// Word expression with products, inverses, integer powers, conjugations u^v
// and commutators [u,v], e.g. "[g1,g2]^g1 * g2^3".
ExprPtr parse_expression(const PcPresentation &p, const std::string &text);

std::string word_to_string(const PcPresentation &p, const Word &w);

} // namespace qpc
