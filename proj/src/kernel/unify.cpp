#include <algorithm>
#include <cctype>

#include "lpt/term.hpp"

namespace lpt {

// --------------------------------------------------------- Substitution

const Term* Substitution::lookup(const Var& v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (bindings_.empty()) return t;
  if (t.is_var()) {
    const Term* b = lookup(t.as_var());
    return b ? *b : t;
  }
  if (!t.is_compound() || t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::compound(t.functor(), std::move(args)) : t;
}

Literal Substitution::apply(const Literal& l) const {
  std::vector<Term> args;
  args.reserve(l.args().size());
  for (const auto& a : l.args()) args.push_back(apply(a));
  return l.with_args(std::move(args));
}

std::vector<Literal> Substitution::apply(const std::vector<Literal>& ls) const {
  std::vector<Literal> out;
  out.reserve(ls.size());
  for (const auto& l : ls) out.push_back(apply(l));
  return out;
}

Clause Substitution::apply(const Clause& c) const {
  return Clause{c.id, apply(c.head), apply(c.body)};
}

void Substitution::bind(const Var& v, const Term& t) {
  Term resolved = apply(t);
  Substitution single;
  single.bindings_.emplace(v, resolved);
  for (auto& [_, range] : bindings_) range = single.apply(range);
  bindings_.insert_or_assign(v, std::move(resolved));
}

Substitution Substitution::restricted_to(const std::vector<Var>& vars) const {
  Substitution out;
  for (const auto& v : vars) {
    if (const Term* t = lookup(v)) out.bindings_.emplace(v, *t);
  }
  return out;
}

// ----------------------------------------------------------- Unification

bool unify_into(const Term& a, const Term& b, Substitution& s) {
  Term x = s.apply(a);
  Term y = s.apply(b);
  if (x.is_var()) {
    if (y.is_var() && y.as_var() == x.as_var()) return true;
    if (y.occurs(x.as_var())) return false;
    s.bind(x.as_var(), y);
    return true;
  }
  if (y.is_var()) {
    if (x.occurs(y.as_var())) return false;
    s.bind(y.as_var(), x);
    return true;
  }
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case TermKind::Integer: return x.value() == y.value();
    case TermKind::NegInf: return true;
    case TermKind::Variable: return false;
    case TermKind::Compound: break;
  }
  if (x.functor() != y.functor() || x.arity() != y.arity()) return false;
  for (std::size_t i = 0; i < x.arity(); ++i) {
    if (!unify_into(x.args()[i], y.args()[i], s)) return false;
  }
  return true;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

std::optional<Substitution> unify(const Literal& a, const Literal& b) {
  if (a.is_builtin() != b.is_builtin() || a.predicate() != b.predicate() ||
      a.args().size() != b.args().size()) {
    return std::nullopt;
  }
  Substitution s;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!unify_into(a.args()[i], b.args()[i], s)) return std::nullopt;
  }
  return s;
}

bool match(const Term& pattern, const Term& target, Substitution& s) {
  if (pattern.is_var()) {
    if (const Term* bound = s.lookup(pattern.as_var())) return *bound == target;
    s.insert_raw(pattern.as_var(), target);
    return true;
  }
  if (pattern.kind() != target.kind()) return false;
  switch (pattern.kind()) {
    case TermKind::Integer: return pattern.value() == target.value();
    case TermKind::NegInf: return true;
    case TermKind::Variable: return false;
    case TermKind::Compound: break;
  }
  if (pattern.functor() != target.functor() || pattern.arity() != target.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!match(pattern.args()[i], target.args()[i], s)) return false;
  }
  return true;
}

bool match(const Literal& pattern, const Literal& target, Substitution& s) {
  if (pattern.is_builtin() != target.is_builtin() || pattern.predicate() != target.predicate() ||
      pattern.args().size() != target.args().size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.args().size(); ++i) {
    if (!match(pattern.args()[i], target.args()[i], s)) return false;
  }
  return true;
}

// -------------------------------------------------------------- Renaming

std::set<Var> vars_of(const Clause& c) {
  auto v = c.vars();
  return {v.begin(), v.end()};
}

std::set<Var> vars_of(const std::vector<Literal>& ls) {
  std::vector<Var> v;
  for (const auto& l : ls) l.collect_vars(v);
  return {v.begin(), v.end()};
}

int next_free_index(const std::set<Var>& vars) {
  int top = 0;
  for (const auto& v : vars) top = std::max(top, v.index);
  return top + 1;
}

Clause rename_apart(const Clause& c, const std::set<Var>& avoid) {
  auto own = c.vars();
  if (own.empty()) return c;
  std::set<Var> all = avoid;
  all.insert(own.begin(), own.end());
  const int fresh = next_free_index(all);
  Substitution s;
  for (const auto& v : own) s.insert_raw(v, Term::var(v.name, fresh));
  return s.apply(c);
}

Clause normalize_variables(const Clause& c) {
  std::set<std::string> taken;
  Substitution s;
  for (const auto& v : c.vars()) {
    std::string name = v.name;
    if (taken.count(name) != 0) {
      std::string stem = name;
      while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
      for (int k = 1;; ++k) {
        name = stem + std::to_string(k);
        if (taken.count(name) == 0) break;
      }
    }
    taken.insert(name);
    s.insert_raw(v, Term::var(name, 0));
  }
  return s.apply(c);
}

std::string variant_key(const Clause& c) {
  Substitution s;
  int n = 0;
  for (const auto& v : c.vars()) s.insert_raw(v, Term::var("_V" + std::to_string(n++), 0));
  Clause k = s.apply(c);
  k.id.clear();
  return to_string(k);
}

bool variant(const Clause& a, const Clause& b) { return variant_key(a) == variant_key(b); }

bool alpha_equivalent_programs(const Program& a, const Program& b) {
  if (a.clauses().size() != b.clauses().size()) return false;
  std::vector<std::string> ka, kb;
  for (const auto& c : a.clauses()) ka.push_back(variant_key(c));
  for (const auto& c : b.clauses()) kb.push_back(variant_key(c));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

}  // namespace lpt
