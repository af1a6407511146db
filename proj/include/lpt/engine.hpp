#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "lpt/term.hpp"

namespace lpt {

struct SolveLimits {
  std::int64_t max_depth = 10000;
  std::int64_t max_steps = 5'000'000;
  std::int64_t max_answers = 1'000'000;

  /// Throws InvalidArgument unless all limits are strictly positive.
  void validate() const;
};

struct AnswerSet {
  /// One substitution per answer, restricted to the query variables.
  std::vector<Substitution> answers;
  /// Successful clause resolutions plus builtin evaluations.
  std::int64_t steps = 0;
  /// True when the whole search space was explored within the limits.
  bool exhausted = false;
};

/// Depth-first, left-to-right SLD resolution over a program compiled once.
/// solve() is const and keeps all machine state local, so one Solver may be
/// shared between threads.
class Solver {
 public:
  explicit Solver(const Program& p);
  ~Solver();
  Solver(const Solver&);
  Solver& operator=(const Solver&);

  AnswerSet solve(const std::vector<Literal>& query, const SolveLimits& limits = {}) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Throws NongroundBuiltin when a comparison is reached with an unbound
/// argument and BuiltinType when it compares a non-number.
AnswerSet solve(const Program& p, const std::vector<Literal>& query, const SolveLimits& limits = {});

/// Argument sort used to enumerate ground instances.
enum class Sort { Unknown, Int, List, Any };

/// Per-predicate argument sorts. Cons heads and builtin operands are Int,
/// nil and cons tails are List; sorts flow through shared variables.
/// Remaining Unknown positions become Any.
std::map<PredicateKey, std::vector<Sort>> infer_sorts(const Program& p);

/// All lists over `domain` of length at most max_len, shortest first and
/// lexicographic within a length.
std::vector<Term> ground_lists(const std::vector<std::int64_t>& domain, int max_len);
/// Ground values of a sort: integers, lists, or both for Any.
std::vector<Term> ground_values(Sort s, const std::vector<std::int64_t>& domain, int max_len);

struct ModelSummary {
  PredicateKey predicate;
  std::vector<std::int64_t> domain;
  int max_list_len = 0;
  std::set<Literal> atoms;
};

/// Ground instances of `pred` over the bounds with at least one answer.
/// Throws LimitExceeded when some query is undecided within `limits`.
ModelSummary bounded_extension(const Program& p, const PredicateKey& pred, const std::vector<std::int64_t>& domain,
                               int max_list_len, const SolveLimits& limits = {});
ModelSummary bounded_extension(const Solver& solver, const std::vector<Sort>& sorts, const PredicateKey& pred,
                               const std::vector<std::int64_t>& domain, int max_list_len,
                               const SolveLimits& limits = {});

std::string to_string(const ModelSummary& m);

}  // namespace lpt
