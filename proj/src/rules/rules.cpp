#include "lpt/rules.hpp"

#include <algorithm>
#include <map>

#include "lpt/abduce.hpp"
#include "lpt/error.hpp"

namespace lpt {

namespace {

std::size_t require_clause(const Program& p, const std::string& id) {
  auto i = p.index_of(id);
  if (!i) throw Error(ErrorCode::UnknownClause, "unknown clause " + id);
  return *i;
}

void require_index(const Clause& c, int index, bool allow_end = false) {
  const int limit = static_cast<int>(c.body.size()) + (allow_end ? 1 : 0);
  if (index < 0 || index >= limit) {
    throw Error(ErrorCode::IndexOutOfRange, "position " + std::to_string(index) + " out of range for clause " + c.id +
                                                " with " + std::to_string(c.body.size()) + " body literals");
  }
}

Program replace_clause(const Program& p, std::size_t at, const std::vector<Clause>& with) {
  Program out(p.name());
  for (const auto& [id, origin] : p.provenance()) out.set_provenance(id, origin);
  const auto& cs = p.clauses();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i != at) {
      out.add(cs[i]);
      continue;
    }
    for (const auto& c : with) out.add(c);
  }
  return out;
}

Transformed in_place(const Program& p, std::size_t at, Clause c, Safety safety, const std::string& origin) {
  c = normalize_variables(c);
  Transformed t{replace_clause(p, at, {c}), safety, {}, {}};
  t.program.set_provenance(c.id, origin);
  return t;
}

std::set<Var> vars_of(const Literal& l) {
  std::vector<Var> v;
  l.collect_vars(v);
  return {v.begin(), v.end()};
}

std::set<Var> clause_vars_except(const Clause& c, const std::vector<int>& skip) {
  std::vector<Var> v;
  c.head.collect_vars(v);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    if (std::find(skip.begin(), skip.end(), static_cast<int>(i)) == skip.end()) c.body[i].collect_vars(v);
  }
  return {v.begin(), v.end()};
}

// Matches folder body literals onto the target literals at `positions`, in
// order. Returns the substitution or nullopt.
std::optional<Substitution> match_body(const Clause& folder, const Clause& target, const std::vector<int>& positions) {
  if (positions.size() != folder.body.size()) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!match(folder.body[i], target.body[positions[i]], s)) return std::nullopt;
  }
  return s;
}

// The internal-variable condition of folding. Empty string when it holds.
std::string internal_variable_violation(const Clause& folder, const Clause& target, const std::vector<int>& positions,
                                        const Substitution& s) {
  std::set<Var> head_vars = vars_of(folder.head);
  std::set<Var> head_images;
  for (const auto& v : head_vars) {
    Term t = s.apply(Term::var(v));
    std::vector<Var> vs;
    t.collect_vars(vs);
    head_images.insert(vs.begin(), vs.end());
  }
  std::set<Var> outside = clause_vars_except(target, positions);
  std::set<Var> images;
  for (const auto& v : vars_of(folder.body)) {
    if (head_vars.count(v) != 0) continue;
    Term t = s.apply(Term::var(v));
    if (!t.is_var()) return "internal variable " + v.name + " maps to non-variable " + to_string(t);
    const Var& w = t.as_var();
    if (!images.insert(w).second) return "internal variables share the image " + to_string(t);
    if (outside.count(w) != 0 || head_images.count(w) != 0) {
      return "internal variable " + v.name + " maps to " + to_string(t) + ", which occurs outside the folded literals";
    }
  }
  return {};
}

bool builtin_false(const Literal& l) {
  if (!l.is_builtin()) return false;
  const Term& a = l.args()[0];
  const Term& b = l.args()[1];
  if (l.op() == BuiltinOp::Eq) return !unify(a, b).has_value();
  if (!a.is_number() || !b.is_number()) return false;
  auto rank = [](const Term& t) { return t.is_neg_inf() ? std::pair<int, std::int64_t>{0, 0} : std::pair{1, t.value()}; };
  return l.op() == BuiltinOp::Leq ? !(rank(a) <= rank(b)) : !(rank(a) < rank(b));
}

}  // namespace

const Clause& resolve_folder(const FolderRef& ref, const Program& current, const FolderContext& ctx) {
  const Program* where = &current;
  if (ref.source == FolderSource::BaseProgram) where = ctx.base;
  if (ref.source == FolderSource::NewDefinitions) where = ctx.new_definitions;
  const Clause* c = where ? where->find(ref.clause_id) : nullptr;
  if (!c) {
    throw Error(ErrorCode::UnknownClause, "folder " + to_string(ref.source) + ":" + ref.clause_id + " not found");
  }
  return *c;
}

Transformed unfold(const Program& p, const std::string& clause, int index) {
  const std::size_t at = require_clause(p, clause);
  const Clause& target = p.clauses()[at];
  require_index(target, index);
  const Literal& atom = target.body[index];
  if (atom.is_builtin()) {
    throw Error(ErrorCode::BuiltinPosition, "cannot unfold builtin " + to_string(atom) + " in " + clause);
  }
  std::vector<Clause> resolvents;
  const auto avoid = vars_of(target);
  int k = 0;
  for (const Clause* d : p.definition(atom.key())) {
    Clause fresh = rename_apart(*d, avoid);
    auto s = unify(atom, fresh.head);
    if (!s) continue;
    std::vector<Literal> body(target.body.begin(), target.body.begin() + index);
    body.insert(body.end(), fresh.body.begin(), fresh.body.end());
    body.insert(body.end(), target.body.begin() + index + 1, target.body.end());
    Clause r{clause + "." + std::to_string(++k), s->apply(target.head), s->apply(body)};
    resolvents.push_back(normalize_variables(r));
  }
  // Ids must not collide with clauses that survive.
  Program rest = replace_clause(p, at, {});
  for (auto& r : resolvents) {
    r.id = rest.fresh_id(r.id);
    rest.add(r);
  }
  Transformed t{replace_clause(p, at, resolvents), Safety::SemanticsPreserving, {}, {}};
  t.program.erase_provenance(clause);
  for (const auto& r : resolvents) {
    t.added.push_back(r.id);
    t.program.set_provenance(r.id, "unfold " + clause + " at " + std::to_string(index));
  }
  if (resolvents.empty()) t.notes.push_back("no resolvents: clause " + clause + " deleted");
  return t;
}

Transformed fold(const Program& p, const std::string& clause, const std::vector<int>& positions, const Clause& folder) {
  const std::size_t at = require_clause(p, clause);
  const Clause& target = p.clauses()[at];
  if (positions.empty()) throw Error(ErrorCode::NoMatch, "fold needs at least one position");
  for (int i : positions) require_index(target, i);
  if (!std::is_sorted(positions.begin(), positions.end()) ||
      std::adjacent_find(positions.begin(), positions.end()) != positions.end()) {
    throw Error(ErrorCode::NoMatch, "fold positions must be strictly ascending");
  }
  if (folder.body.empty()) throw Error(ErrorCode::NoMatch, "folder " + folder.id + " has an empty body");
  if (variant(folder, target)) {
    throw Error(ErrorCode::SelfFoldWithoutRecursionGuard,
                "folding " + clause + " with a variant of itself makes no progress");
  }
  Clause f = rename_apart(folder, vars_of(target));
  auto s = match_body(f, target, positions);
  if (!s) {
    throw Error(ErrorCode::NoMatch, "body of folder " + folder.id + " does not match the selected literals of " + clause);
  }
  if (auto why = internal_variable_violation(f, target, positions, *s); !why.empty()) {
    throw Error(ErrorCode::VariableConditionViolated, why);
  }
  Clause c = target;
  c.body.clear();
  for (std::size_t i = 0; i < target.body.size(); ++i) {
    if (static_cast<int>(i) == positions.front()) c.body.push_back(s->apply(f.head));
    if (std::find(positions.begin(), positions.end(), static_cast<int>(i)) == positions.end()) {
      c.body.push_back(target.body[i]);
    }
  }
  return in_place(p, at, c, Safety::SemanticsPreserving, "fold with " + folder.id);
}

std::vector<FoldMatch> find_fold_matches(const Program& p, const std::string& clause, const Clause& folder) {
  const Clause& target = p.clauses()[require_clause(p, clause)];
  std::vector<FoldMatch> out;
  if (folder.body.empty() || folder.body.size() > target.body.size() || variant(folder, target)) return out;
  Clause f = rename_apart(folder, vars_of(target));
  std::vector<int> pos;
  // Ordered subsequences of the body, pruned literal by literal.
  auto rec = [&](auto&& self, std::size_t k, int from, Substitution s) -> void {
    if (k == f.body.size()) {
      if (internal_variable_violation(f, target, pos, s).empty()) out.push_back({pos, s});
      return;
    }
    for (int i = from; i < static_cast<int>(target.body.size()); ++i) {
      Substitution next = s;
      if (!match(f.body[k], target.body[i], next)) continue;
      pos.push_back(i);
      self(self, k + 1, i + 1, next);
      pos.pop_back();
    }
  };
  rec(rec, 0, 0, Substitution{});
  return out;
}

Transformed introduce_goal(const Program& p, const std::string& clause, const Literal& literal, int position) {
  const std::size_t at = require_clause(p, clause);
  Clause c = p.clauses()[at];
  require_index(c, position, true);
  c.body.insert(c.body.begin() + position, literal);
  return in_place(p, at, c, Safety::ThinningRisk, "introduce " + to_string(literal));
}

Transformed delete_goal(const Program& p, const std::string& clause, int position) {
  const std::size_t at = require_clause(p, clause);
  Clause c = p.clauses()[at];
  require_index(c, position);
  std::string removed = to_string(c.body[position]);
  c.body.erase(c.body.begin() + position);
  return in_place(p, at, c, Safety::WideningRisk, "delete " + removed);
}

Transformed define(const Program& p, const std::vector<Clause>& clauses) {
  if (clauses.empty()) throw Error(ErrorCode::InvalidArgument, "define needs at least one clause");
  for (const auto& c : clauses) {
    if (c.head.is_builtin()) throw Error(ErrorCode::InvalidArgument, "cannot define a builtin");
    if (p.defines(c.head.key())) {
      throw Error(ErrorCode::PredicateAlreadyDefined, c.head.key().str() + " is already defined");
    }
  }
  Transformed t{p, Safety::SemanticsPreserving, {}, {}};
  std::map<std::string, int> counters;
  for (const auto& c : clauses) {
    Clause n = normalize_variables(c);
    n.id = t.program.fresh_id(c.head.predicate() + "." + std::to_string(++counters[c.head.predicate()]));
    t.program.add(n);
    t.program.set_provenance(n.id, "define");
    t.added.push_back(n.id);
  }
  return t;
}

std::vector<LemmaMatch> find_lemma_matches(const Clause& c, const Lemma& lemma, Orientation o) {
  std::vector<Literal> source = lemma.side_conditions;
  const auto& first = o == Orientation::LeftToRight || lemma.kind == LemmaKind::Implication ? lemma.lhs : lemma.rhs;
  source.insert(source.end(), first.begin(), first.end());
  if (lemma.kind == LemmaKind::Implication && o == Orientation::RightToLeft) {
    source.insert(source.end(), lemma.rhs.begin(), lemma.rhs.end());
  }
  std::vector<LemmaMatch> out;
  std::vector<int> pos;
  std::vector<bool> used(c.body.size(), false);
  auto rec = [&](auto&& self, std::size_t k, Substitution s) -> void {
    if (k == source.size()) {
      out.push_back({pos, s});
      return;
    }
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (used[i]) continue;
      Substitution next = s;
      if (!match(source[k], c.body[i], next)) continue;
      used[i] = true;
      pos.push_back(static_cast<int>(i));
      self(self, k + 1, next);
      pos.pop_back();
      used[i] = false;
    }
  };
  rec(rec, 0, Substitution{});
  return out;
}

Transformed apply_lemma(const Program& p, const std::string& clause, const Lemma& lemma, Orientation o,
                        int match_index) {
  const std::size_t at = require_clause(p, clause);
  const Clause& target = p.clauses()[at];
  // Lemma variables are renamed apart through a throwaway clause.
  Clause carrier{"", Literal::atom("$lemma", {}), {}};
  for (const auto* part : {&lemma.side_conditions, &lemma.lhs, &lemma.rhs}) {
    carrier.body.insert(carrier.body.end(), part->begin(), part->end());
  }
  Clause renamed = rename_apart(carrier, vars_of(target));
  Lemma l = lemma;
  auto take = [&, k = std::size_t{0}](std::size_t n) mutable {
    std::vector<Literal> out(renamed.body.begin() + k, renamed.body.begin() + k + n);
    k += n;
    return out;
  };
  l.side_conditions = take(lemma.side_conditions.size());
  l.lhs = take(lemma.lhs.size());
  l.rhs = take(lemma.rhs.size());

  auto matches = find_lemma_matches(target, l, o);
  if (matches.empty()) {
    throw Error(ErrorCode::NoMatch, "lemma " + lemma.id + " (" + to_string(o) + ") does not match the body of " + clause);
  }
  if (match_index < 0 || match_index >= static_cast<int>(matches.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "lemma match " + std::to_string(match_index) + " out of range; " +
                                                std::to_string(matches.size()) + " matches");
  }
  const LemmaMatch& m = matches[match_index];
  const bool ltr = o == Orientation::LeftToRight;
  const auto& from = ltr ? l.lhs : l.rhs;
  const auto& to = ltr ? l.rhs : l.lhs;
  const std::size_t from_offset = l.side_conditions.size();

  std::vector<int> removed;
  std::vector<Literal> added;
  Safety safety = Safety::SemanticsPreserving;
  if (l.kind == LemmaKind::Equivalence) {
    for (std::size_t i = 0; i < from.size(); ++i) {
      if (std::find(to.begin(), to.end(), from[i]) == to.end()) removed.push_back(m.positions[from_offset + i]);
    }
    for (const auto& x : to) {
      if (std::find(from.begin(), from.end(), x) == from.end()) added.push_back(m.substitution.apply(x));
    }
  } else if (ltr) {
    safety = Safety::ThinningRisk;
    for (const auto& x : l.rhs) added.push_back(m.substitution.apply(x));
  } else {
    safety = Safety::WideningRisk;
    const std::size_t rhs_offset = from_offset + l.lhs.size();
    for (std::size_t i = 0; i < l.rhs.size(); ++i) removed.push_back(m.positions[rhs_offset + i]);
  }

  std::sort(removed.begin(), removed.end());
  Clause c = target;
  c.body.clear();
  int first_removed = -1;
  for (std::size_t i = 0; i < target.body.size(); ++i) {
    if (std::binary_search(removed.begin(), removed.end(), static_cast<int>(i))) {
      if (first_removed < 0) first_removed = static_cast<int>(c.body.size());
      continue;
    }
    c.body.push_back(target.body[i]);
  }
  // Each added literal goes right after the literals that first bind its
  // variables in the original body; a variable first bound by a removed
  // literal counts from that literal's slot. Lemma order is kept.
  auto slot_of = [&](std::size_t i) {
    int kept = 0;
    for (std::size_t k = 0; k < i; ++k) {
      if (!std::binary_search(removed.begin(), removed.end(), static_cast<int>(k))) ++kept;
    }
    return std::binary_search(removed.begin(), removed.end(), static_cast<int>(i)) ? kept : kept + 1;
  };
  const std::set<Var> head = vars_of(c.head);
  int last = -1;
  int inserted = 0;
  for (const auto& lit : added) {
    if (std::find(c.body.begin(), c.body.end(), lit) != c.body.end()) continue;
    int where = 0;
    bool floating = false;
    for (const auto& v : vars_of(lit)) {
      int first = -1;
      for (std::size_t k = 0; k < target.body.size() && first < 0; ++k) {
        if (vars_of(target.body[k]).count(v) != 0) first = static_cast<int>(k);
      }
      if (first >= 0) {
        where = std::max(where, slot_of(first) + inserted);
      } else if (head.count(v) == 0) {
        floating = true;
      }
    }
    if (floating) where = (first_removed >= 0 ? first_removed : static_cast<int>(c.body.size()) - inserted) + inserted;
    where = std::max(where, last + 1);
    c.body.insert(c.body.begin() + where, lit);
    last = where;
    ++inserted;
  }
  return in_place(p, at, c, safety, "lemma " + lemma.id + " " + to_string(o));
}

Transformed rename_predicate(const Program& p, const PredicateKey& from, const PredicateKey& to) {
  if (!p.defines(from)) throw Error(ErrorCode::UnknownPredicate, from.str() + " is not defined");
  if (from == to) return Transformed{p, Safety::SemanticsPreserving, {}, {}};
  if (from.arity != to.arity) throw Error(ErrorCode::InvalidArgument, "rename must keep the arity");
  if (p.defines(to)) throw Error(ErrorCode::PredicateAlreadyDefined, to.str() + " is already defined");
  auto rename = [&](const Literal& l) { return !l.is_builtin() && l.key() == from ? l.with_predicate(to.name) : l; };
  Program out(p.name());
  for (const auto& [id, origin] : p.provenance()) out.set_provenance(id, origin);
  for (const auto& c : p.clauses()) {
    Clause n{c.id, rename(c.head), {}};
    for (const auto& l : c.body) n.body.push_back(rename(l));
    out.add(n);
  }
  return Transformed{out, Safety::SemanticsPreserving, {}, {}};
}

bool subsumes(const Clause& a, const Clause& b) {
  Clause x = rename_apart(a, vars_of(b));
  Substitution s;
  if (!match(x.head, b.head, s)) return false;
  auto rec = [&](auto&& self, std::size_t k, const Substitution& cur) -> bool {
    if (k == x.body.size()) return true;
    for (const auto& l : b.body) {
      Substitution next = cur;
      if (match(x.body[k], l, next) && self(self, k + 1, next)) return true;
    }
    return false;
  };
  return rec(rec, 0, s);
}

Transformed delete_clause(const Program& p, const std::string& clause, Justification j, const std::string& subsumer) {
  const std::size_t at = require_clause(p, clause);
  const Clause& target = p.clauses()[at];
  Safety safety = Safety::WideningRisk;
  std::string note;
  switch (j) {
    case Justification::Subsumed: {
      const Clause* by = subsumer.empty() || subsumer == clause ? nullptr : p.find(subsumer);
      if (!by || !subsumes(*by, target)) {
        throw Error(ErrorCode::SubsumptionCheckFailed,
                    subsumer.empty() ? "no subsuming clause given for " + clause
                                     : "clause " + subsumer + " does not subsume " + clause);
      }
      safety = Safety::SemanticsPreserving;
      note = "subsumed by " + subsumer;
      break;
    }
    case Justification::UnsatisfiableBody: {
      auto weak = weak_predicates(p);
      for (const auto& l : target.body) {
        if (builtin_false(l) || (!l.is_builtin() && weak.count(l.key()) != 0)) {
          safety = Safety::SemanticsPreserving;
          note = "unsatisfiable literal " + to_string(l);
          break;
        }
      }
      if (note.empty()) note = "unsatisfiability not machine-checked";
      break;
    }
    case Justification::UserAsserted: note = "user asserted"; break;
  }
  Transformed t{replace_clause(p, at, {}), safety, {}, {note}};
  t.program.erase_provenance(clause);
  return t;
}

namespace {

template <class E>
struct Names {
  std::vector<std::pair<E, const char*>> table;

  std::string str(E e) const {
    for (const auto& [k, v] : table) {
      if (k == e) return v;
    }
    return "?";
  }
  E parse(const std::string& s, const char* what) const {
    for (const auto& [k, v] : table) {
      if (s == v) return k;
    }
    throw Error(ErrorCode::InvalidArgument, std::string("unknown ") + what + " '" + s + "'");
  }
};

const Names<RuleKind> kRules{{{RuleKind::Unfold, "unfold"},
                              {RuleKind::Fold, "fold"},
                              {RuleKind::IntroduceGoal, "introduce_goal"},
                              {RuleKind::DeleteGoal, "delete_goal"},
                              {RuleKind::Define, "define"},
                              {RuleKind::ApplyLemma, "apply_lemma"},
                              {RuleKind::RenamePredicate, "rename_predicate"},
                              {RuleKind::DeleteClause, "delete_clause"}}};
const Names<Safety> kSafety{{{Safety::SemanticsPreserving, "semantics_preserving"},
                             {Safety::ThinningRisk, "thinning_risk"},
                             {Safety::WideningRisk, "widening_risk"},
                             {Safety::LemmaConditional, "lemma_conditional"}}};
const Names<FolderSource> kSources{{{FolderSource::CurrentProgram, "current"},
                                    {FolderSource::BaseProgram, "base"},
                                    {FolderSource::NewDefinitions, "new_definitions"}}};
const Names<Orientation> kOrientations{
    {{Orientation::LeftToRight, "left_to_right"}, {Orientation::RightToLeft, "right_to_left"}}};
const Names<Justification> kJustifications{{{Justification::Subsumed, "subsumed"},
                                            {Justification::UnsatisfiableBody, "unsatisfiable_body"},
                                            {Justification::UserAsserted, "user_asserted"}}};

}  // namespace

std::string to_string(RuleKind k) { return kRules.str(k); }
std::string to_string(Safety s) { return kSafety.str(s); }
std::string to_string(FolderSource s) { return kSources.str(s); }
std::string to_string(Orientation o) { return kOrientations.str(o); }
std::string to_string(Justification j) { return kJustifications.str(j); }
RuleKind parse_rule_kind(const std::string& s) { return kRules.parse(s, "rule"); }
Safety parse_safety(const std::string& s) { return kSafety.parse(s, "safety tag"); }
FolderSource parse_folder_source(const std::string& s) { return kSources.parse(s, "folder source"); }
Orientation parse_orientation(const std::string& s) { return kOrientations.parse(s, "orientation"); }
Justification parse_justification(const std::string& s) { return kJustifications.parse(s, "justification"); }

}  // namespace lpt
