#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lpt/engine.hpp"
#include "lpt/lemma.hpp"

namespace lpt {

struct LemmaVerdict {
  bool holds = true;
  /// Ground instances of the lemma variables, first few in enumeration order.
  std::vector<Substitution> counterexamples;
  std::size_t instances = 0;
};

/// Bounded check over every ground instance of the lemma variables. Sorts
/// come from how the variables are used in `p`. Throws LimitExceeded when an
/// instance is undecided.
LemmaVerdict check_lemma(const Lemma& lemma, const Program& p, const std::vector<std::int64_t>& domain,
                         int max_list_len, const SolveLimits& limits = {}, std::size_t max_counterexamples = 10);

enum class Verdict { Equal, Thinned, Widened, Mixed };

struct ExtensionDiff {
  Verdict verdict = Verdict::Equal;
  std::set<Literal> missing;  // in before, not after
  std::set<Literal> extra;    // in after, not before
  bool imploded = false;
};

using AtomFilter = std::function<bool(const Literal&)>;

ExtensionDiff compare_extensions(const Program& before, const Program& after, const PredicateKey& pred,
                                 const std::vector<std::int64_t>& domain, int max_list_len,
                                 const SolveLimits& limits = {});

/// For renames: the predicate may be called differently on each side.
/// Atoms are compared by arguments; missing atoms carry the before name and
/// extra atoms the after name. `filter` sees atoms under the before name.
ExtensionDiff compare_extensions(const Program& before, const PredicateKey& before_pred, const Program& after,
                                 const PredicateKey& after_pred, const std::vector<std::int64_t>& domain,
                                 int max_list_len, const SolveLimits& limits = {}, const AtomFilter& filter = {});

struct ProfileRow {
  int n = 0;
  std::int64_t steps = 0;
  std::int64_t answers = 0;
  bool censored = false;
};

struct StepProfile {
  std::string predicate;
  std::vector<ProfileRow> rows;
};

/// Solves pred([n, n-1, ..., 1], X) to the first answer for each n.
StepProfile step_profile(const Program& p, const std::string& pred, const std::vector<int>& sizes,
                         const SolveLimits& limits = {});

std::string to_string(Verdict v);
std::string to_string(const ExtensionDiff& d);
/// Aligned plain-text table.
std::string to_table(const StepProfile& profile);

}  // namespace lpt
