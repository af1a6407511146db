#pragma once

#include <set>
#include <string>
#include <vector>

#include "lpt/engine.hpp"
#include "lpt/rules.hpp"
#include "lpt/term.hpp"

namespace lpt {

/// Least fixpoint: no clauses, or every clause has a weak user predicate in
/// its body. Builtins are never weak.
std::set<PredicateKey> weak_predicates(const Program& p);

struct Complement {
  std::vector<Literal> missing;
  Substitution substitution;
  /// Folder body indices that matched, paired with the target positions.
  std::vector<int> matched_folder_literals;
  std::vector<int> matched_positions;
};

/// Order-preserving partial matches of the folder body onto the selected
/// target literals. Throws NoPartialMatch when no folder literal matches
/// any selected literal; an empty selection yields the whole body.
std::vector<Complement> plain_complement(const Clause& target, const std::vector<int>& selected_positions,
                                         const Clause& folder);

/// Term size with variables counting one node.
struct WellFoundedOrder {
  bool strict = true;

  bool less(const Term& a, const Term& b) const;
};

struct CandidateScores {
  bool enables_fold = false;
  bool successful_path = false;
  int variable_coordination = 0;
  int unlinked_variables = 0;
  bool well_founded = false;
  bool self_referential = false;
  int size_penalty = 0;
};

enum class Occam { Deducible, Subsumed, Contradictory, Underivable, Restricting };

struct AbductiveCandidate {
  Literal literal;
  Substitution substitution;
  FolderRef folder;
  int insert_position = 0;
  /// Positions the fold takes once the literal is in place.
  std::vector<int> fold_positions;
  CandidateScores scores;
  std::vector<int> total;

  std::string fingerprint() const;
};

/// Candidates for one missing literal per folder, best first.
std::vector<AbductiveCandidate> rank_candidates(const Program& p, const FolderContext& ctx, const std::string& clause,
                                                const std::vector<FolderRef>& folders,
                                                const WellFoundedOrder& order = {}, const SolveLimits& limits = {});

/// Base-view clauses for the target's head predicate, then every new
/// definition.
std::vector<FolderRef> default_folders(const Program& p, const FolderContext& ctx, const std::string& clause);

/// Advisory classification from bounded extensions; never part of the rank.
Occam classify(const Program& p, const std::string& clause, const AbductiveCandidate& c,
               const std::vector<std::int64_t>& domain, int max_list_len, const SolveLimits& limits = {});

std::string to_string(Occam o);

}  // namespace lpt
