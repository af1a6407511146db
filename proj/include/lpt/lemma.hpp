#pragma once

#include <string>
#include <vector>

#include "lpt/term.hpp"

namespace lpt {

enum class LemmaKind { Equivalence, Implication };

/// side_conditions => (lhs => rhs), or lhs <=> rhs for Equivalence.
struct Lemma {
  std::string id;
  std::vector<Literal> side_conditions;
  std::vector<Literal> lhs;
  std::vector<Literal> rhs;
  LemmaKind kind = LemmaKind::Implication;

  /// Throws InvalidArgument when rhs uses a variable that is bound by
  /// neither lhs nor the side conditions.
  void validate() const;
};

std::string to_string(const Lemma& l);
std::string to_string(LemmaKind k);

}  // namespace lpt
