#include "lpt/term.hpp"

#include <algorithm>
#include <sstream>

#include "lpt/error.hpp"

namespace lpt {

namespace {
const char* const kNil = "[]";
const char* const kCons = ".";
}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::NongroundBuiltin: return "NongroundBuiltin";
    case ErrorCode::BuiltinType: return "BuiltinType";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::BuiltinPosition: return "BuiltinPosition";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::VariableConditionViolated: return "VariableConditionViolated";
    case ErrorCode::SelfFoldWithoutRecursionGuard: return "SelfFoldWithoutRecursionGuard";
    case ErrorCode::PredicateAlreadyDefined: return "PredicateAlreadyDefined";
    case ErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ErrorCode::UnknownClause: return "UnknownClause";
    case ErrorCode::UnknownLemma: return "UnknownLemma";
    case ErrorCode::SubsumptionCheckFailed: return "SubsumptionCheckFailed";
    case ErrorCode::NoPartialMatch: return "NoPartialMatch";
    case ErrorCode::DuplicateDefinition: return "DuplicateDefinition";
    case ErrorCode::BranchConflict: return "BranchConflict";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Term

Term Term::var(std::string name, int index) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Variable;
  n->var = Var{std::move(name), index};
  return Term(std::move(n));
}

Term Term::var(const Var& v) { return var(v.name, v.index); }

Term Term::integer(std::int64_t value) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Integer;
  n->value = value;
  return Term(std::move(n));
}

Term Term::neg_inf() {
  static const Term t = [] {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::NegInf;
    return Term(std::move(n));
  }();
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Compound;
  n->functor = std::move(functor);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::nil() {
  static const Term t = compound(kNil, {});
  return t;
}

Term Term::cons(Term head, Term tail) { return compound(kCons, {std::move(head), std::move(tail)}); }

Term Term::list(const std::vector<Term>& items, std::optional<Term> tail) {
  Term out = tail ? *tail : nil();
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(*it, out);
  return out;
}

Term Term::int_list(const std::vector<std::int64_t>& items) {
  std::vector<Term> ts;
  ts.reserve(items.size());
  for (auto v : items) ts.push_back(integer(v));
  return list(ts);
}

bool Term::is_nil() const { return is_compound() && arity() == 0 && functor() == kNil; }
bool Term::is_cons() const { return is_compound() && arity() == 2 && functor() == kCons; }

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args()) n += a.size();
  return n;
}

bool Term::is_ground() const {
  if (is_var()) return false;
  return std::all_of(args().begin(), args().end(), [](const Term& a) { return a.is_ground(); });
}

bool Term::occurs(const Var& v) const {
  if (is_var()) return as_var() == v;
  return std::any_of(args().begin(), args().end(), [&](const Term& a) { return a.occurs(v); });
}

void Term::collect_vars(std::vector<Var>& out) const {
  if (is_var()) {
    if (std::find(out.begin(), out.end(), as_var()) == out.end()) out.push_back(as_var());
    return;
  }
  for (const auto& a : args()) a.collect_vars(out);
}

std::optional<std::vector<Term>> Term::list_items() const {
  std::vector<Term> items;
  const Term* cur = this;
  while (cur->is_cons()) {
    items.push_back(cur->args()[0]);
    cur = &cur->args()[1];
  }
  if (!cur->is_nil()) return std::nullopt;
  return items;
}

bool operator==(const Term& a, const Term& b) { return (a <=> b) == std::strong_ordering::equal; }

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) <=> static_cast<int>(b.kind());
  switch (a.kind()) {
    case TermKind::Variable: return a.as_var() <=> b.as_var();
    case TermKind::Integer: return a.value() <=> b.value();
    case TermKind::NegInf: return std::strong_ordering::equal;
    case TermKind::Compound: break;
  }
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  if (auto c = a.functor() <=> b.functor(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ------------------------------------------------------------- Literal

Literal Literal::atom(std::string predicate, std::vector<Term> args) {
  Literal l;
  l.predicate_ = std::move(predicate);
  l.args_ = std::move(args);
  return l;
}

Literal Literal::builtin(BuiltinOp op, Term lhs, Term rhs) {
  Literal l;
  l.builtin_ = op;
  l.predicate_ = to_string(op);
  l.args_ = {std::move(lhs), std::move(rhs)};
  return l;
}

std::size_t Literal::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

bool Literal::is_ground() const {
  return std::all_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_ground(); });
}

void Literal::collect_vars(std::vector<Var>& out) const {
  for (const auto& a : args_) a.collect_vars(out);
}

Literal Literal::with_args(std::vector<Term> args) const {
  Literal l = *this;
  l.args_ = std::move(args);
  return l;
}

Literal Literal::with_predicate(std::string name) const {
  Literal l = *this;
  l.predicate_ = std::move(name);
  return l;
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (auto c = a.is_builtin() <=> b.is_builtin(); c != 0) return c;
  if (a.is_builtin()) {
    if (auto c = static_cast<int>(a.op()) <=> static_cast<int>(b.op()); c != 0) return c;
  }
  if (auto c = a.predicate_ <=> b.predicate_; c != 0) return c;
  if (auto c = a.args_.size() <=> b.args_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args_.size(); ++i) {
    if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::vector<Var> Clause::vars() const {
  std::vector<Var> out;
  head.collect_vars(out);
  for (const auto& l : body) l.collect_vars(out);
  return out;
}

// ------------------------------------------------------------- Program

void Program::set_provenance(const std::string& clause_id, std::string origin) {
  provenance_[clause_id] = std::move(origin);
}

void Program::add(Clause clause) {
  if (find(clause.id) != nullptr) {
    throw Error(ErrorCode::DuplicateDefinition, "duplicate clause id '" + clause.id + "'");
  }
  clauses_.push_back(std::move(clause));
}

const Clause* Program::find(const std::string& id) const {
  for (const auto& c : clauses_) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::optional<std::size_t> Program::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (clauses_[i].id == id) return i;
  }
  return std::nullopt;
}

bool Program::defines(const PredicateKey& key) const {
  return std::any_of(clauses_.begin(), clauses_.end(),
                     [&](const Clause& c) { return c.head.key() == key; });
}

std::vector<const Clause*> Program::definition(const PredicateKey& key) const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses_) {
    if (c.head.key() == key) out.push_back(&c);
  }
  return out;
}

std::vector<PredicateKey> Program::predicates() const {
  std::vector<PredicateKey> out;
  for (const auto& c : clauses_) {
    auto k = c.head.key();
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

std::string Program::fresh_id(const std::string& wanted) const {
  if (find(wanted) == nullptr) return wanted;
  for (int k = 2;; ++k) {
    std::string id = wanted + "#" + std::to_string(k);
    if (find(id) == nullptr) return id;
  }
}

Program Program::restricted_to(const std::set<PredicateKey>& keys) const {
  Program out(name_);
  for (const auto& c : clauses_) {
    if (keys.count(c.head.key()) != 0) {
      out.clauses_.push_back(c);
      if (auto it = provenance_.find(c.id); it != provenance_.end()) {
        out.provenance_[c.id] = it->second;
      }
    }
  }
  return out;
}

// ------------------------------------------------------------ Printing

namespace {

void print_term(std::ostream& os, const Term& t);

void print_list(std::ostream& os, const Term& t) {
  os << '[';
  const Term* cur = &t;
  bool first = true;
  while (cur->is_cons()) {
    if (!first) os << ',';
    print_term(os, cur->args()[0]);
    first = false;
    cur = &cur->args()[1];
  }
  if (!cur->is_nil()) {
    os << '|';
    print_term(os, *cur);
  }
  os << ']';
}

void print_term(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::Variable:
      os << t.as_var().name;
      if (t.as_var().index != 0) os << '_' << t.as_var().index;
      return;
    case TermKind::Integer: os << t.value(); return;
    case TermKind::NegInf: os << "neg_inf"; return;
    case TermKind::Compound: break;
  }
  if (t.is_nil()) {
    os << "[]";
    return;
  }
  if (t.is_cons()) {
    print_list(os, t);
    return;
  }
  os << t.functor();
  if (t.arity() == 0) return;
  os << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    print_term(os, t.args()[i]);
  }
  os << ')';
}

}  // namespace

std::string to_string(BuiltinOp op) {
  switch (op) {
    case BuiltinOp::Leq: return "leq";
    case BuiltinOp::Lt: return "lt";
    case BuiltinOp::Eq: return "eq";
  }
  return "?";
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

std::string to_string(const Literal& l) {
  std::ostringstream os;
  if (l.is_builtin()) {
    static const char* const symbols[] = {" =< ", " < ", " = "};
    print_term(os, l.args()[0]);
    os << symbols[static_cast<int>(l.op())];
    print_term(os, l.args()[1]);
    return os.str();
  }
  os << l.predicate();
  if (!l.args().empty()) {
    os << '(';
    for (std::size_t i = 0; i < l.args().size(); ++i) {
      if (i) os << ',';
      print_term(os, l.args()[i]);
    }
    os << ')';
  }
  return os.str();
}

std::string to_string(const Clause& c) {
  std::string out = to_string(c.head);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    out += (i == 0 ? " :- " : ", ");
    out += to_string(c.body[i]);
  }
  out += '.';
  return out;
}

std::string to_string(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses()) {
    out += to_string(c);
    out += '\n';
  }
  return out;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += to_string(Term::var(v)) + " -> " + to_string(t);
  }
  return out + "}";
}

}  // namespace lpt
