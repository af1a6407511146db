#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpt/lemma.hpp"
#include "lpt/term.hpp"

namespace lpt {

enum class RuleKind { Unfold, Fold, IntroduceGoal, DeleteGoal, Define, ApplyLemma, RenamePredicate, DeleteClause };
enum class Safety { SemanticsPreserving, ThinningRisk, WideningRisk, LemmaConditional };
enum class FolderSource { CurrentProgram, BaseProgram, NewDefinitions };
enum class Orientation { LeftToRight, RightToLeft };
enum class Justification { Subsumed, UnsatisfiableBody, UserAsserted };

struct FolderRef {
  FolderSource source = FolderSource::BaseProgram;
  std::string clause_id;

  friend bool operator==(const FolderRef&, const FolderRef&) = default;
};

/// Programs a FolderRef can point into besides the current program. The
/// base view is the session base with all renames applied so far; new
/// definitions are the define'd clauses as originally written.
struct FolderContext {
  const Program* base = nullptr;
  const Program* new_definitions = nullptr;
};

/// Throws UnknownClause when the reference does not resolve.
const Clause& resolve_folder(const FolderRef& ref, const Program& current, const FolderContext& ctx);

/// Result of a single rule: the new program plus what the rule decided.
struct Transformed {
  Program program;
  Safety safety = Safety::SemanticsPreserving;
  /// Ids of clauses added (resolvents, definitions).
  std::vector<std::string> added;
  /// Non-fatal remarks, e.g. an unfold with no resolvents.
  std::vector<std::string> notes;
};

/// Resolves the body atom at `index` against every clause of its predicate.
/// Resolvents take the target's place, with ids "<id>.<k>".
Transformed unfold(const Program& p, const std::string& clause, int index);

/// Replaces the selected body literals (an ordered subsequence matching the
/// folder body) by the folder head instance, placed at the first position.
Transformed fold(const Program& p, const std::string& clause, const std::vector<int>& positions, const Clause& folder);

struct FoldMatch {
  std::vector<int> positions;
  Substitution substitution;
};
/// Every position tuple at which fold with `folder` would succeed.
std::vector<FoldMatch> find_fold_matches(const Program& p, const std::string& clause, const Clause& folder);

Transformed introduce_goal(const Program& p, const std::string& clause, const Literal& literal, int position);
Transformed delete_goal(const Program& p, const std::string& clause, int position);

/// Appends clauses for predicates not yet defined; ids are "<pred>.<k>".
Transformed define(const Program& p, const std::vector<Clause>& clauses);

struct LemmaMatch {
  std::vector<int> positions;  // body positions of the matched source literals
  Substitution substitution;
};
/// Ways the lemma's source side (side conditions plus lhs, or rhs when
/// applied right to left) embeds into the clause body.
std::vector<LemmaMatch> find_lemma_matches(const Clause& c, const Lemma& lemma, Orientation o);
Transformed apply_lemma(const Program& p, const std::string& clause, const Lemma& lemma, Orientation o,
                        int match_index = 0);

Transformed rename_predicate(const Program& p, const PredicateKey& from, const PredicateKey& to);

/// `subsumer` is required for Subsumed and ignored otherwise.
Transformed delete_clause(const Program& p, const std::string& clause, Justification j,
                          const std::string& subsumer = {});

/// True when some instance of a's head and body is contained in b.
bool subsumes(const Clause& a, const Clause& b);

std::string to_string(RuleKind k);
std::string to_string(Safety s);
std::string to_string(FolderSource s);
std::string to_string(Orientation o);
std::string to_string(Justification j);
RuleKind parse_rule_kind(const std::string& s);
Safety parse_safety(const std::string& s);
FolderSource parse_folder_source(const std::string& s);
Orientation parse_orientation(const std::string& s);
Justification parse_justification(const std::string& s);

}  // namespace lpt
