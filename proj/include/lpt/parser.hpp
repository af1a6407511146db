#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lpt/term.hpp"

namespace lpt {

/// Parses the Prolog-like clause syntax:
///
///   sort(L, M) :- perm1(L, M), ord1(M).   % comment
///
/// Lists use [H|T]; comparisons are =<, <, =, plus >, >= which are stored
/// flipped as < and =<. Clause ids are "<predicate>.<n>" numbered per
/// predicate in order of appearance. Throws SyntaxError.
Program parse_program(std::string_view text, std::string name = {});

/// A comma-separated conjunction, optionally terminated by '.'.
std::vector<Literal> parse_conjunction(std::string_view text);
Literal parse_literal(std::string_view text);
Term parse_term(std::string_view text);
/// Single clause with an explicit id.
Clause parse_clause(std::string_view text, std::string id);

}  // namespace lpt
