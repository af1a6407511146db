#include "lpt/derivation.hpp"

#include "lpt/corpus.hpp"
#include "lpt/error.hpp"
#include "lpt/parser.hpp"

namespace lpt {

using nlohmann::json;

PredicateKey parse_predicate_key(const std::string& text) {
  const auto slash = text.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == text.size()) {
    throw Error(ErrorCode::InvalidArgument, "expected name/arity, got '" + text + "'");
  }
  PredicateKey k;
  k.name = text.substr(0, slash);
  try {
    std::size_t used = 0;
    k.arity = std::stoul(text.substr(slash + 1), &used);
    if (used != text.size() - slash - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "expected name/arity, got '" + text + "'");
  }
  return k;
}

namespace {

json folder_json(const FolderRef& f) { return {{"source", to_string(f.source)}, {"clause", f.clause_id}}; }

FolderRef folder_from(const json& j) {
  FolderRef f;
  f.source = parse_folder_source(j.value("source", "base"));
  f.clause_id = j.at("clause").get<std::string>();
  return f;
}

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorCode::InvalidArgument, std::string("step is missing '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("step field '") + name + "' has the wrong type");
  }
}

}  // namespace

json to_json(const Step& s) {
  json j;
  j["rule"] = to_string(s.rule);
  switch (s.rule) {
    case RuleKind::Unfold:
    case RuleKind::DeleteGoal:
      j["clause"] = s.clause;
      j["index"] = s.index;
      break;
    case RuleKind::Fold:
      j["clause"] = s.clause;
      j["positions"] = s.positions;
      j["folder"] = folder_json(s.folder);
      break;
    case RuleKind::IntroduceGoal:
      j["clause"] = s.clause;
      if (s.candidate) {
        json c{{"rank", s.candidate->rank}, {"fingerprint", s.candidate->fingerprint}};
        if (!s.candidate->folders.empty()) {
          c["folders"] = json::array();
          for (const auto& f : s.candidate->folders) c["folders"].push_back(folder_json(f));
        }
        j["candidate"] = c;
      } else {
        j["literal"] = s.literal ? to_string(*s.literal) : "";
        j["position"] = s.position;
      }
      break;
    case RuleKind::Define:
      j["clauses"] = s.clauses;
      break;
    case RuleKind::ApplyLemma:
      j["clause"] = s.clause;
      j["lemma"] = s.lemma;
      j["orientation"] = to_string(s.orientation);
      j["match"] = s.match;
      break;
    case RuleKind::RenamePredicate:
      j["from"] = s.from.str();
      j["to"] = s.to.str();
      break;
    case RuleKind::DeleteClause:
      j["clause"] = s.clause;
      j["justification"] = to_string(s.justification);
      if (!s.subsumer.empty()) j["subsumer"] = s.subsumer;
      break;
  }
  if (s.verify) j["verify"] = s.verify->str();
  if (!s.label.empty()) j["label"] = s.label;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

Step step_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "step must be an object");
  Step s;
  s.rule = parse_rule_kind(field<std::string>(j, "rule"));
  auto clause = [&] { s.clause = field<std::string>(j, "clause"); };
  switch (s.rule) {
    case RuleKind::Unfold:
    case RuleKind::DeleteGoal:
      clause();
      s.index = field<int>(j, "index");
      break;
    case RuleKind::Fold:
      clause();
      s.positions = field<std::vector<int>>(j, "positions");
      s.folder = folder_from(field<json>(j, "folder"));
      break;
    case RuleKind::IntroduceGoal:
      clause();
      if (j.contains("candidate")) {
        const json& c = j.at("candidate");
        CandidateChoice choice;
        choice.rank = c.value("rank", 0);
        choice.fingerprint = c.value("fingerprint", "");
        if (c.contains("folders")) {
          for (const auto& f : c.at("folders")) choice.folders.push_back(folder_from(f));
        }
        s.candidate = choice;
      } else {
        s.literal = parse_literal(field<std::string>(j, "literal"));
        s.position = field<int>(j, "position");
      }
      break;
    case RuleKind::Define:
      s.clauses = field<std::vector<std::string>>(j, "clauses");
      break;
    case RuleKind::ApplyLemma:
      clause();
      s.lemma = field<std::string>(j, "lemma");
      s.orientation = parse_orientation(j.value("orientation", "left_to_right"));
      s.match = j.value("match", 0);
      break;
    case RuleKind::RenamePredicate:
      s.from = parse_predicate_key(field<std::string>(j, "from"));
      s.to = parse_predicate_key(field<std::string>(j, "to"));
      break;
    case RuleKind::DeleteClause:
      clause();
      s.justification = parse_justification(field<std::string>(j, "justification"));
      s.subsumer = j.value("subsumer", "");
      break;
  }
  if (j.contains("verify")) s.verify = parse_predicate_key(field<std::string>(j, "verify"));
  s.label = j.value("label", "");
  s.note = j.value("note", "");
  return s;
}

Session::Session(Program base, std::map<std::string, Lemma> lemmas) : lemmas_(std::move(lemmas)) {
  Program checked(base.name());
  for (const auto& c : base.clauses()) checked.add(c);
  HistoryEntry first;
  first.program = std::move(base);
  first.base_view = first.program;
  if (!first.program.empty()) first.goal = first.program.clauses().front().head.key();
  history_.push_back(std::move(first));
}

FolderContext Session::folder_context() const {
  const HistoryEntry& e = history_[cursor_];
  return FolderContext{&e.base_view, &e.new_definitions};
}

namespace {

std::pair<PredicateKey, PredicateKey> audit_keys(const Step& step, const HistoryEntry& before) {
  if (step.verify) return {*step.verify, *step.verify};
  switch (step.rule) {
    case RuleKind::RenamePredicate: return {step.from, step.to};
    case RuleKind::Define: return {before.goal, before.goal};
    default: {
      const Clause* c = before.program.find(step.clause);
      if (!c) throw Error(ErrorCode::UnknownClause, "unknown clause " + step.clause);
      return {c->head.key(), c->head.key()};
    }
  }
}

ExtensionDiff diff_for(const Program& before, const Program& after, const std::pair<PredicateKey, PredicateKey>& keys,
                       const VerifyOptions& o) {
  return compare_extensions(before, keys.first, after, keys.second, o.domain, o.max_list_len, o.limits);
}

}  // namespace

const HistoryEntry& Session::apply(const Step& step, const std::optional<VerifyOptions>& verify) {
  if (cursor_ + 1 != history_.size()) {
    throw Error(ErrorCode::BranchConflict, "cursor is at " + std::to_string(cursor_) + " of " +
                                               std::to_string(history_.size() - 1) + "; truncate before applying");
  }
  const HistoryEntry& prev = history_.back();
  const Program& p = prev.program;
  const FolderContext ctx{&prev.base_view, &prev.new_definitions};

  HistoryEntry next;
  next.base_view = prev.base_view;
  next.new_definitions = prev.new_definitions;
  next.goal = prev.goal;
  next.step = step;

  Transformed t;
  switch (step.rule) {
    case RuleKind::Unfold:
      t = unfold(p, step.clause, step.index);
      break;
    case RuleKind::Fold:
      t = fold(p, step.clause, step.positions, resolve_folder(step.folder, p, ctx));
      break;
    case RuleKind::IntroduceGoal:
      if (step.candidate) {
        const CandidateChoice& choice = *step.candidate;
        const auto folders = choice.folders.empty() ? default_folders(p, ctx, step.clause) : choice.folders;
        auto ranked = rank_candidates(p, ctx, step.clause, folders);
        if (choice.rank < 0 || choice.rank >= static_cast<int>(ranked.size())) {
          throw Error(ErrorCode::IndexOutOfRange, "candidate rank " + std::to_string(choice.rank) + " but only " +
                                                      std::to_string(ranked.size()) + " candidates");
        }
        const AbductiveCandidate& cand = ranked[choice.rank];
        if (!choice.fingerprint.empty() && cand.fingerprint() != choice.fingerprint) {
          throw Error(ErrorCode::FingerprintMismatch, "candidate " + std::to_string(choice.rank) + " is " +
                                                          cand.fingerprint() + ", expected " + choice.fingerprint);
        }
        next.chosen = cand;
        t = introduce_goal(p, step.clause, cand.literal, cand.insert_position);
      } else {
        if (!step.literal) throw Error(ErrorCode::InvalidArgument, "introduce_goal needs a literal or a candidate");
        t = introduce_goal(p, step.clause, *step.literal, step.position);
      }
      break;
    case RuleKind::DeleteGoal:
      t = delete_goal(p, step.clause, step.index);
      break;
    case RuleKind::Define: {
      std::vector<Clause> clauses;
      for (const auto& text : step.clauses) clauses.push_back(parse_clause(text, ""));
      t = define(p, clauses);
      for (const auto& id : t.added) next.new_definitions.add(*t.program.find(id));
      break;
    }
    case RuleKind::ApplyLemma: {
      auto it = lemmas_.find(step.lemma);
      if (it == lemmas_.end()) throw Error(ErrorCode::UnknownLemma, "no lemma named '" + step.lemma + "'");
      t = apply_lemma(p, step.clause, it->second, step.orientation, step.match);
      break;
    }
    case RuleKind::RenamePredicate:
      t = rename_predicate(p, step.from, step.to);
      if (next.base_view.defines(step.from) && !next.base_view.defines(step.to)) {
        next.base_view = rename_predicate(next.base_view, step.from, step.to).program;
      }
      if (next.new_definitions.defines(step.from) && !next.new_definitions.defines(step.to)) {
        next.new_definitions = rename_predicate(next.new_definitions, step.from, step.to).program;
      }
      if (next.goal == step.from) next.goal = step.to;
      break;
    case RuleKind::DeleteClause:
      t = delete_clause(p, step.clause, step.justification, step.subsumer);
      break;
  }
  next.program = std::move(t.program);
  next.safety = t.safety;
  next.notes = std::move(t.notes);
  next.audited = audit_keys(step, prev);
  if (verify) next.diff = diff_for(p, next.program, *next.audited, *verify);

  history_.push_back(std::move(next));
  ++cursor_;
  ++revision_;
  return history_.back();
}

const ExtensionDiff& Session::verify_entry(std::size_t index, const VerifyOptions& options) {
  if (index == 0 || index >= history_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "no step at history index " + std::to_string(index));
  }
  HistoryEntry& e = history_[index];
  e.diff = diff_for(history_[index - 1].program, e.program, *e.audited, options);
  return *e.diff;
}

void Session::undo() {
  if (!can_undo()) throw Error(ErrorCode::IndexOutOfRange, "nothing to undo");
  --cursor_;
  ++revision_;
}

void Session::redo() {
  if (!can_redo()) throw Error(ErrorCode::IndexOutOfRange, "nothing to redo");
  ++cursor_;
  ++revision_;
}

void Session::truncate() {
  if (cursor_ + 1 == history_.size()) return;
  history_.resize(cursor_ + 1);
  ++revision_;
}

std::vector<AbductiveCandidate> Session::candidates(const std::string& clause,
                                                    const std::vector<FolderRef>& folders) const {
  const FolderContext ctx = folder_context();
  return rank_candidates(current(), ctx, clause, folders.empty() ? default_folders(current(), ctx, clause) : folders);
}

json to_json(const Script& s) {
  json j;
  j["name"] = s.name;
  if (!s.title.empty()) j["title"] = s.title;
  if (!s.base.empty()) {
    j["base"] = s.base;
  } else {
    j["base_text"] = s.base_text;
  }
  j["steps"] = json::array();
  for (const auto& st : s.steps) j["steps"].push_back(to_json(st));
  if (!s.expected_final.empty()) j["expected_final"] = s.expected_final;
  return j;
}

Script script_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "script must be an object");
  Script s;
  s.name = j.value("name", "");
  s.title = j.value("title", "");
  s.base = j.value("base", "");
  s.base_text = j.value("base_text", "");
  s.expected_final = j.value("expected_final", "");
  if (j.contains("steps")) {
    std::size_t i = 0;
    for (const auto& st : j.at("steps")) {
      try {
        s.steps.push_back(step_from_json(st));
      } catch (const Error& e) {
        throw Error(e.code(), "step " + std::to_string(i) + ": " + e.what());
      }
      ++i;
    }
  }
  return s;
}

Script parse_script(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("script is not valid JSON: ") + e.what());
  }
  return script_from_json(j);
}

bool matches_expected(const Program& final_program, const Program& expected) {
  const auto preds = expected.predicates();
  std::set<PredicateKey> keys(preds.begin(), preds.end());
  for (const auto& k : keys) {
    if (!final_program.defines(k)) return false;
  }
  return alpha_equivalent_programs(final_program.restricted_to(keys), expected);
}

ReplayResult replay(const Script& script, const Corpus& corpus, const std::optional<VerifyOptions>& verify) {
  Program base = script.base.empty() ? parse_program(script.base_text, script.name) : corpus.program(script.base);
  ReplayResult r{Session(std::move(base), corpus.lemmas())};
  r.session.set_origin(script.base);
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    try {
      r.session.apply(script.steps[i], verify);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(i) + " (" + to_string(script.steps[i].rule) + "): " + e.what());
    }
  }
  if (!script.expected_final.empty()) {
    r.has_expected = true;
    r.matches_expected = matches_expected(r.final_program(), corpus.program(script.expected_final));
  }
  return r;
}

Script export_script(const Session& s, const std::string& name) {
  Script out;
  out.name = name;
  if (s.origin().empty()) {
    out.base_text = to_string(s.base());
  } else {
    out.base = s.origin();
  }
  for (std::size_t i = 1; i <= s.cursor(); ++i) out.steps.push_back(*s.history()[i].step);
  return out;
}

}  // namespace lpt
