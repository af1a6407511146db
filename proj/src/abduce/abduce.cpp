#include "lpt/abduce.hpp"

#include <algorithm>
#include <map>

#include "lpt/error.hpp"

namespace lpt {

std::set<PredicateKey> weak_predicates(const Program& p) {
  std::set<PredicateKey> all;
  for (const auto& c : p.clauses()) {
    all.insert(c.head.key());
    for (const auto& l : c.body) {
      if (!l.is_builtin()) all.insert(l.key());
    }
  }
  std::set<PredicateKey> weak;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& k : all) {
      if (weak.count(k) != 0) continue;
      bool is_weak = true;
      for (const Clause* c : p.definition(k)) {
        bool blocked = std::any_of(c->body.begin(), c->body.end(),
                                   [&](const Literal& l) { return !l.is_builtin() && weak.count(l.key()) != 0; });
        if (!blocked) {
          is_weak = false;
          break;
        }
      }
      if (is_weak) {
        weak.insert(k);
        changed = true;
      }
    }
  }
  return weak;
}

std::vector<Complement> plain_complement(const Clause& target, const std::vector<int>& selected_positions,
                                         const Clause& folder) {
  if (folder.body.empty()) throw Error(ErrorCode::InvalidArgument, "folder " + folder.id + " has an empty body");
  for (int i : selected_positions) {
    if (i < 0 || i >= static_cast<int>(target.body.size())) {
      throw Error(ErrorCode::IndexOutOfRange, "selected position " + std::to_string(i) + " out of range");
    }
  }
  Clause f = rename_apart(folder, vars_of(target));
  if (selected_positions.empty()) return {Complement{f.body, {}, {}, {}}};

  std::vector<int> selected = selected_positions;
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

  std::vector<Complement> out;
  Complement cur;
  // Folder literal k either matches a selected literal after the previous
  // match or stays missing.
  auto rec = [&](auto&& self, std::size_t k, std::size_t from, const Substitution& s) -> void {
    if (k == f.body.size()) {
      if (cur.matched_positions.empty()) return;
      Complement c = cur;
      c.substitution = s;
      c.missing.clear();
      for (std::size_t i = 0; i < f.body.size(); ++i) {
        if (std::find(c.matched_folder_literals.begin(), c.matched_folder_literals.end(), static_cast<int>(i)) ==
            c.matched_folder_literals.end()) {
          c.missing.push_back(s.apply(f.body[i]));
        }
      }
      out.push_back(std::move(c));
      return;
    }
    for (std::size_t j = from; j < selected.size(); ++j) {
      Substitution next = s;
      if (!match(f.body[k], target.body[selected[j]], next)) continue;
      cur.matched_folder_literals.push_back(static_cast<int>(k));
      cur.matched_positions.push_back(selected[j]);
      self(self, k + 1, j + 1, next);
      cur.matched_folder_literals.pop_back();
      cur.matched_positions.pop_back();
    }
    self(self, k + 1, from, s);
  };
  rec(rec, 0, 0, Substitution{});
  if (out.empty()) {
    throw Error(ErrorCode::NoPartialMatch, "no body literal of " + folder.id + " matches the selected literals");
  }
  return out;
}

namespace {

bool builtin_may_succeed(const Literal& l) {
  if (!l.is_ground()) return true;
  try {
    return !solve(Program{}, {l}, SolveLimits{10, 10, 1}).answers.empty();
  } catch (const Error&) {
    return false;
  }
}

bool successful_path(const Program& p, const Literal& l, SolveLimits limits) {
  if (l.is_builtin()) return builtin_may_succeed(l);
  std::vector<Term> args;
  for (std::size_t i = 0; i < l.args().size(); ++i) args.push_back(Term::var("X", static_cast<int>(i)));
  try {
    limits.max_depth = std::min<std::int64_t>(limits.max_depth, 200);
    limits.max_steps = std::min<std::int64_t>(limits.max_steps, 20000);
    limits.max_answers = 1;
    return !solve(p, {Literal::atom(l.predicate(), args)}, limits).answers.empty();
  } catch (const Error&) {
    return false;
  }
}

std::set<Var> literal_vars(const Literal& l) {
  std::vector<Var> v;
  l.collect_vars(v);
  return {v.begin(), v.end()};
}

}  // namespace

bool WellFoundedOrder::less(const Term& a, const Term& b) const {
  return strict ? a.size() < b.size() : a.size() <= b.size();
}

std::string AbductiveCandidate::fingerprint() const { return to_string(literal); }

std::vector<FolderRef> default_folders(const Program& p, const FolderContext& ctx, const std::string& clause) {
  const Clause* target = p.find(clause);
  if (!target) throw Error(ErrorCode::UnknownClause, "unknown clause " + clause);
  std::vector<FolderRef> out;
  if (ctx.base) {
    for (const Clause* c : ctx.base->definition(target->head.key())) {
      if (!c->body.empty()) out.push_back({FolderSource::BaseProgram, c->id});
    }
  }
  if (ctx.new_definitions) {
    for (const auto& c : ctx.new_definitions->clauses()) {
      if (!c.body.empty()) out.push_back({FolderSource::NewDefinitions, c.id});
    }
  }
  return out;
}

std::vector<AbductiveCandidate> rank_candidates(const Program& p, const FolderContext& ctx, const std::string& clause,
                                                const std::vector<FolderRef>& folders, const WellFoundedOrder& order,
                                                const SolveLimits& limits) {
  const Clause* found = p.find(clause);
  if (!found) throw Error(ErrorCode::UnknownClause, "unknown clause " + clause);
  const Clause target = *found;
  std::vector<int> all(target.body.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

  std::set<Var> body_vars = vars_of(target.body);
  std::set<Var> clause_vars = vars_of(target);
  std::vector<AbductiveCandidate> out;
  std::set<std::pair<std::string, std::vector<int>>> seen;

  for (std::size_t fi = 0; fi < folders.size(); ++fi) {
    const Clause& folder = resolve_folder(folders[fi], p, ctx);
    if (folder.body.size() < 2 || target.body.empty()) continue;
    std::vector<Complement> complements;
    try {
      complements = plain_complement(target, all, folder);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoPartialMatch) continue;
      throw;
    }
    for (const auto& comp : complements) {
      if (comp.missing.size() != 1) continue;
      int missing_index = 0;
      while (std::find(comp.matched_folder_literals.begin(), comp.matched_folder_literals.end(), missing_index) !=
             comp.matched_folder_literals.end()) {
        ++missing_index;
      }
      int insert = comp.matched_positions.front();
      for (std::size_t k = 0; k < comp.matched_folder_literals.size(); ++k) {
        if (comp.matched_folder_literals[k] < missing_index) insert = comp.matched_positions[k] + 1;
      }
      std::vector<int> positions{insert};
      for (int q : comp.matched_positions) positions.push_back(q >= insert ? q + 1 : q);
      std::sort(positions.begin(), positions.end());

      AbductiveCandidate c;
      Transformed folded;
      try {
        Transformed introduced = introduce_goal(p, clause, comp.missing.front(), insert);
        c.literal = introduced.program.find(clause)->body[insert];
        folded = fold(introduced.program, clause, positions, folder);
      } catch (const Error&) {
        continue;
      }
      if (!seen.insert({to_string(c.literal), positions}).second) continue;
      c.substitution = comp.substitution;
      c.folder = folders[fi];
      c.insert_position = insert;
      c.fold_positions = positions;

      CandidateScores& s = c.scores;
      s.enables_fold = true;
      s.successful_path = successful_path(p, c.literal, limits);
      for (const auto& v : literal_vars(c.literal)) {
        if (body_vars.count(v) != 0) ++s.variable_coordination;
        if (clause_vars.count(v) == 0) ++s.unlinked_variables;
      }
      const Literal& head_instance = folded.program.find(clause)->body[positions.front()];
      s.self_referential = head_instance.key() == target.head.key();
      const std::size_t n = std::min(head_instance.args().size(), target.head.args().size());
      for (std::size_t i = 0; i < n && !s.well_founded; ++i) {
        s.well_founded = order.less(head_instance.args()[i], target.head.args()[i]);
      }
      s.size_penalty = static_cast<int>(c.literal.size());

      c.total = {s.self_referential && !s.well_founded ? 1 : 0,
                 s.well_founded ? 0 : 1,
                 s.successful_path ? 0 : 1,
                 s.unlinked_variables > 0 ? 1 : 0,
                 -s.variable_coordination,
                 s.size_penalty,
                 static_cast<int>(fi)};
      c.total.insert(c.total.end(), positions.begin(), positions.end());
      c.total.push_back(insert);
      out.push_back(std::move(c));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AbductiveCandidate& a, const AbductiveCandidate& b) { return a.total < b.total; });
  return out;
}

namespace {

// The clause alone under a private head predicate, so its own extension can
// be measured.
Program with_clause_probe(const Program& p, const Clause& c, const std::string& probe) {
  Program out = p;
  Clause copy = c;
  copy.id = out.fresh_id(probe + ".1");
  copy.head = c.head.with_predicate(probe);
  out.add(copy);
  return out;
}

}  // namespace

Occam classify(const Program& p, const std::string& clause, const AbductiveCandidate& c,
               const std::vector<std::int64_t>& domain, int max_list_len, const SolveLimits& limits) {
  const Clause* target = p.find(clause);
  if (!target) throw Error(ErrorCode::UnknownClause, "unknown clause " + clause);
  if (std::find(target->body.begin(), target->body.end(), c.literal) != target->body.end()) return Occam::Subsumed;
  if (!c.literal.is_builtin() && (!p.defines(c.literal.key()) || weak_predicates(p).count(c.literal.key()) != 0)) {
    return Occam::Underivable;
  }

  Program after = introduce_goal(p, clause, c.literal, c.insert_position).program;
  const std::string probe = "$probe";
  const PredicateKey probe_key{probe, target->head.args().size()};
  auto before_probe = bounded_extension(with_clause_probe(p, *target, probe), probe_key, domain, max_list_len, limits);
  auto after_probe =
      bounded_extension(with_clause_probe(after, *after.find(clause), probe), probe_key, domain, max_list_len, limits);
  if (after_probe.atoms.empty() && !before_probe.atoms.empty()) return Occam::Contradictory;

  const PredicateKey key = target->head.key();
  auto before = bounded_extension(p, key, domain, max_list_len, limits);
  auto now = bounded_extension(after, key, domain, max_list_len, limits);
  return before.atoms == now.atoms ? Occam::Deducible : Occam::Restricting;
}

std::string to_string(Occam o) {
  switch (o) {
    case Occam::Deducible: return "deducible";
    case Occam::Subsumed: return "subsumed";
    case Occam::Contradictory: return "contradictory";
    case Occam::Underivable: return "underivable";
    case Occam::Restricting: return "restricting";
  }
  return "?";
}

}  // namespace lpt
