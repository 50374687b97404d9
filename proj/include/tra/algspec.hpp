#pragma once

// `.alg` algebra specification files:
//
//   # comment to end of line
//   n = 3
//   base = 2
//   carrier = [[0,0,1], [0,1,0], [1,0,0]]   # or: carrier = full
//
// Keys may appear in any order, each exactly once. Whitespace and line
// breaks between tokens are insignificant.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tra/algebra.hpp"

namespace tra {

struct AlgebraSpec {
  Dim n = 0;
  BaseSize base = 0;
  /// nullopt: the full space ^n base.
  std::optional<std::vector<Seq>> seqs;

  CarrierRef build(const Limits& limits = {}) const;
};

/// Throws ParseError (with line/column) on malformed text and on sequences
/// that do not fit (n, base).
AlgebraSpec parse_algebra_spec(std::string_view text);
std::string print_algebra_spec(const AlgebraSpec& spec);
/// Spec describing exactly the members of `d`.
AlgebraSpec spec_of(const Carrier& d);

}  // namespace tra
