#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lpt {

/// A logic variable. Two variables are the same iff name and index agree;
/// renaming apart bumps the index and keeps the name for display.
struct Var {
  std::string name;
  int index = 0;

  auto operator<=>(const Var&) const = default;
};

enum class TermKind { Variable, Integer, NegInf, Compound };

/// Immutable first-order term. Lists use the nullary functor "[]" and the
/// binary functor "." so that [H|T] is ".(H, T)".
class Term {
 public:
  static Term var(std::string name, int index = 0);
  static Term var(const Var& v);
  static Term integer(std::int64_t value);
  static Term neg_inf();
  static Term compound(std::string functor, std::vector<Term> args);
  static Term atom(std::string name) { return compound(std::move(name), {}); }
  static Term nil();
  static Term cons(Term head, Term tail);
  static Term list(const std::vector<Term>& items, std::optional<Term> tail = std::nullopt);
  static Term int_list(const std::vector<std::int64_t>& items);

  TermKind kind() const { return node_->kind; }
  bool is_var() const { return kind() == TermKind::Variable; }
  bool is_integer() const { return kind() == TermKind::Integer; }
  bool is_neg_inf() const { return kind() == TermKind::NegInf; }
  bool is_compound() const { return kind() == TermKind::Compound; }
  bool is_number() const { return is_integer() || is_neg_inf(); }
  bool is_nil() const;
  bool is_cons() const;

  const Var& as_var() const { return node_->var; }
  std::int64_t value() const { return node_->value; }
  const std::string& functor() const { return node_->functor; }
  const std::vector<Term>& args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }

  /// Node count; variables and constants count one.
  std::size_t size() const;
  bool is_ground() const;
  bool occurs(const Var& v) const;
  void collect_vars(std::vector<Var>& out) const;

  /// Elements of a proper list, or nullopt when the term is not one.
  std::optional<std::vector<Term>> list_items() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind;
    Var var;
    std::int64_t value = 0;
    std::string functor;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class BuiltinOp { Leq, Lt, Eq };

/// Predicate name and arity.
struct PredicateKey {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const PredicateKey&) const = default;
  std::string str() const { return name + "/" + std::to_string(arity); }
};

/// A body or head literal: a user atom or one of the comparison builtins.
class Literal {
 public:
  static Literal atom(std::string predicate, std::vector<Term> args);
  static Literal builtin(BuiltinOp op, Term lhs, Term rhs);

  bool is_builtin() const { return builtin_.has_value(); }
  BuiltinOp op() const { return *builtin_; }
  const std::string& predicate() const { return predicate_; }
  const std::vector<Term>& args() const { return args_; }
  PredicateKey key() const { return {predicate_, args_.size()}; }

  std::size_t size() const;
  bool is_ground() const;
  void collect_vars(std::vector<Var>& out) const;

  Literal with_args(std::vector<Term> args) const;
  Literal with_predicate(std::string name) const;

  friend bool operator==(const Literal& a, const Literal& b) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);

 private:
  std::optional<BuiltinOp> builtin_;
  std::string predicate_;
  std::vector<Term> args_;
};

struct Clause {
  std::string id;
  Literal head;
  std::vector<Literal> body;

  std::vector<Var> vars() const;
};

/// Ordered clause list. Clause ids are unique; predicate definitions are
/// the clauses sharing a head key.
class Program {
 public:
  Program() = default;
  explicit Program(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::vector<Clause>& mutable_clauses() { return clauses_; }
  const std::map<std::string, std::string>& provenance() const { return provenance_; }
  void set_provenance(const std::string& clause_id, std::string origin);
  void erase_provenance(const std::string& clause_id) { provenance_.erase(clause_id); }

  void add(Clause clause);
  const Clause* find(const std::string& id) const;
  std::optional<std::size_t> index_of(const std::string& id) const;
  bool defines(const PredicateKey& key) const;
  std::vector<const Clause*> definition(const PredicateKey& key) const;
  /// Head predicates in order of first appearance.
  std::vector<PredicateKey> predicates() const;
  /// Fresh id derived from `wanted`, suffixed when already taken.
  std::string fresh_id(const std::string& wanted) const;
  bool empty() const { return clauses_.empty(); }

  /// Subprogram keeping only clauses whose head is in `keys`.
  Program restricted_to(const std::set<PredicateKey>& keys) const;

 private:
  std::string name_;
  std::vector<Clause> clauses_;
  std::map<std::string, std::string> provenance_;
};

/// Variable bindings. Kept idempotent: no bound variable occurs in any
/// binding's range.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<Var, Term>& bindings() const { return bindings_; }
  const Term* lookup(const Var& v) const;
  bool binds(const Var& v) const { return bindings_.count(v) != 0; }

  /// Adds v -> t, substituting t into existing bindings. Requires that v is
  /// unbound and does not occur in t after resolution.
  void bind(const Var& v, const Term& t);
  /// Raw insertion for one-way matching, where ranges never contain domain
  /// variables.
  void insert_raw(const Var& v, const Term& t) { bindings_.insert_or_assign(v, t); }

  Term apply(const Term& t) const;
  Literal apply(const Literal& l) const;
  std::vector<Literal> apply(const std::vector<Literal>& ls) const;
  Clause apply(const Clause& c) const;

  Substitution restricted_to(const std::vector<Var>& vars) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<Var, Term> bindings_;
};

// Unification and matching.

/// Most general unifier with occurs check, or nullopt.
std::optional<Substitution> unify(const Term& a, const Term& b);
std::optional<Substitution> unify(const Literal& a, const Literal& b);
/// Extends `s` so that s(a) == s(b); returns false (s unspecified) on failure.
bool unify_into(const Term& a, const Term& b, Substitution& s);

/// One-way matching: extends `s` binding only variables of `pattern` so that
/// s(pattern) == target. Variables in target are treated as constants.
bool match(const Term& pattern, const Term& target, Substitution& s);
bool match(const Literal& pattern, const Literal& target, Substitution& s);

/// Renames every variable of c to a fresh index not used by `avoid`.
Clause rename_apart(const Clause& c, const std::set<Var>& avoid);
/// Index strictly larger than any index in `vars`.
int next_free_index(const std::set<Var>& vars);
std::set<Var> vars_of(const Clause& c);
std::set<Var> vars_of(const std::vector<Literal>& ls);

/// Renames variables to index 0 with unique display names, keeping the
/// original names where possible (clashes become Ls4, A1, ...).
Clause normalize_variables(const Clause& c);

bool variant(const Clause& a, const Clause& b);
bool alpha_equivalent_programs(const Program& a, const Program& b);
/// Name-independent rendering of a clause (variables numbered by first
/// occurrence); two clauses are variants iff their keys are equal.
std::string variant_key(const Clause& c);

// Printing.
std::string to_string(const Term& t);
std::string to_string(const Literal& l);
std::string to_string(const Clause& c);
std::string to_string(const Program& p);
std::string to_string(const Substitution& s);
std::string to_string(BuiltinOp op);

}  // namespace lpt
