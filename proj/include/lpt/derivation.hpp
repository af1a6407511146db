#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpt/abduce.hpp"
#include "lpt/engine.hpp"
#include "lpt/rules.hpp"
#include "lpt/verify.hpp"

namespace lpt {

class Corpus;

/// Pick the rank-th abductive candidate; replay checks the fingerprint.
struct CandidateChoice {
  int rank = 0;
  std::string fingerprint;
  /// Empty means default_folders.
  std::vector<FolderRef> folders;

  friend bool operator==(const CandidateChoice&, const CandidateChoice&) = default;
};

/// One serialized rule application. Only the fields the rule reads are
/// meaningful.
struct Step {
  RuleKind rule = RuleKind::Unfold;
  std::string clause;
  int index = 0;                  // unfold, delete_goal
  std::vector<int> positions;     // fold
  FolderRef folder;               // fold
  std::optional<Literal> literal; // introduce_goal
  int position = 0;               // introduce_goal
  std::optional<CandidateChoice> candidate;
  std::vector<std::string> clauses;  // define, clause text
  std::string lemma;
  Orientation orientation = Orientation::LeftToRight;
  int match = 0;
  PredicateKey from;
  PredicateKey to;
  Justification justification = Justification::UserAsserted;
  std::string subsumer;
  /// Predicate to audit instead of the default.
  std::optional<PredicateKey> verify;
  std::string label;
  std::string note;
};

nlohmann::json to_json(const Step& s);
Step step_from_json(const nlohmann::json& j);
PredicateKey parse_predicate_key(const std::string& text);

struct VerifyOptions {
  std::vector<std::int64_t> domain{0, 1};
  int max_list_len = 3;
  SolveLimits limits;
};

struct HistoryEntry {
  Program program;
  /// Base program with the renames applied so far; fold target for
  /// FolderSource::BaseProgram.
  Program base_view;
  Program new_definitions;
  PredicateKey goal;
  /// Absent for the initial snapshot.
  std::optional<Step> step;
  /// Literal and position an abductive choice resolved to.
  std::optional<AbductiveCandidate> chosen;
  Safety safety = Safety::SemanticsPreserving;
  std::vector<std::string> notes;
  std::optional<ExtensionDiff> diff;
  /// Predicates the diff was computed for, before and after.
  std::optional<std::pair<PredicateKey, PredicateKey>> audited;
};

/// Linear derivation history with a cursor. Snapshots are never modified
/// once recorded.
class Session {
 public:
  /// Throws DuplicateDefinition on repeated clause ids.
  explicit Session(Program base, std::map<std::string, Lemma> lemmas = {});

  const Program& base() const { return history_.front().program; }
  const Program& current() const { return history_[cursor_].program; }
  const HistoryEntry& current_entry() const { return history_[cursor_]; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  std::size_t cursor() const { return cursor_; }
  std::uint64_t revision() const { return revision_; }
  FolderContext folder_context() const;
  const std::map<std::string, Lemma>& lemmas() const { return lemmas_; }
  /// Corpus name of the base, used when exporting.
  const std::string& origin() const { return origin_; }
  void set_origin(std::string name) { origin_ = std::move(name); }

  /// Throws BranchConflict unless the cursor is at the end.
  const HistoryEntry& apply(const Step& step, const std::optional<VerifyOptions>& verify = std::nullopt);
  /// Diff for the entry at `index` (> 0), computed now and stored.
  const ExtensionDiff& verify_entry(std::size_t index, const VerifyOptions& options);
  bool can_undo() const { return cursor_ > 0; }
  bool can_redo() const { return cursor_ + 1 < history_.size(); }
  void undo();
  void redo();
  /// Drops the snapshots after the cursor.
  void truncate();

  std::vector<AbductiveCandidate> candidates(const std::string& clause,
                                             const std::vector<FolderRef>& folders = {}) const;

 private:
  std::vector<HistoryEntry> history_;
  std::size_t cursor_ = 0;
  std::uint64_t revision_ = 0;
  std::map<std::string, Lemma> lemmas_;
  std::string origin_;
};

/// Recorded steps up to the cursor.
struct Script {
  std::string name;
  std::string title;
  /// Corpus program name, or empty when `base_text` is used.
  std::string base;
  std::string base_text;
  std::vector<Step> steps;
  std::string expected_final;
};

nlohmann::json to_json(const Script& s);
Script script_from_json(const nlohmann::json& j);
Script parse_script(const std::string& text);

struct ReplayResult {
  Session session;
  bool has_expected = false;
  bool matches_expected = false;
  const Program& final_program() const { return session.current(); }
};

/// Errors carry the failing step index in the message and keep the rule's
/// error code.
ReplayResult replay(const Script& script, const Corpus& corpus, const std::optional<VerifyOptions>& verify = std::nullopt);
Script export_script(const Session& s, const std::string& name = {});

/// Compares the final program, restricted to the expected program's
/// predicates, with the expected program.
bool matches_expected(const Program& final_program, const Program& expected);

}  // namespace lpt
