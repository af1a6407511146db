#include <sstream>

#include "lpt/error.hpp"
#include "lpt/parser.hpp"
#include "lpt/service.hpp"

namespace lpt {

using nlohmann::json;

namespace {

json substitution_json(const Substitution& s) {
  json j = json::object();
  for (const auto& [v, t] : s.bindings()) j[to_string(Term::var(v))] = to_string(t);
  return j;
}

json folder_json(const FolderRef& f) { return {{"source", to_string(f.source)}, {"clause", f.clause_id}}; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::istringstream in(path);
  std::string part;
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::string param(const QueryParams& q, const std::string& key, const std::string& fallback = {}) {
  auto it = q.find(key);
  return it == q.end() ? fallback : it->second;
}

ApiResponse error_response(int status, const std::string& code, const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BranchConflict: return 409;
    case ErrorCode::UnknownEntry:
    case ErrorCode::UnknownLemma: return 404;
    case ErrorCode::Syntax:
    case ErrorCode::InvalidArgument: return 400;
    default: return 422;
  }
}

}  // namespace

json to_json(const ExtensionDiff& d) {
  json j{{"verdict", to_string(d.verdict)}, {"imploded", d.imploded}};
  j["missing"] = json::array();
  j["extra"] = json::array();
  for (const auto& a : d.missing) j["missing"].push_back(to_string(a));
  for (const auto& a : d.extra) j["extra"].push_back(to_string(a));
  return j;
}

json to_json(const AbductiveCandidate& c, int rank) {
  const CandidateScores& s = c.scores;
  return {{"rank", rank},
          {"literal", to_string(c.literal)},
          {"fingerprint", c.fingerprint()},
          {"folder", folder_json(c.folder)},
          {"insert_position", c.insert_position},
          {"fold_positions", c.fold_positions},
          {"substitution", substitution_json(c.substitution)},
          {"scores",
           {{"enables_fold", s.enables_fold},
            {"successful_path", s.successful_path},
            {"variable_coordination", s.variable_coordination},
            {"unlinked_variables", s.unlinked_variables},
            {"well_founded", s.well_founded},
            {"self_referential", s.self_referential},
            {"size_penalty", s.size_penalty}}},
          {"total", c.total}};
}

json to_json(const StepProfile& p) {
  json rows = json::array();
  for (const auto& r : p.rows) {
    rows.push_back({{"n", r.n}, {"steps", r.steps}, {"answers", r.answers}, {"censored", r.censored}});
  }
  return {{"predicate", p.predicate}, {"rows", rows}};
}

json to_json(const AnswerSet& a) {
  json answers = json::array();
  for (const auto& s : a.answers) answers.push_back(substitution_json(s));
  return {{"answers", answers}, {"steps", a.steps}, {"exhausted", a.exhausted}};
}

json to_json(const HistoryEntry& e, std::size_t index) {
  json j{{"index", index}, {"safety", to_string(e.safety)}, {"notes", e.notes}};
  if (e.step) {
    j["step"] = to_json(*e.step);
    j["description"] = describe(*e.step);
  }
  if (e.chosen) {
    j["chosen"] = {{"literal", to_string(e.chosen->literal)}, {"insert_position", e.chosen->insert_position}};
  }
  if (e.audited) j["audited"] = {e.audited->first.str(), e.audited->second.str()};
  if (e.diff) j["diff"] = to_json(*e.diff);
  return j;
}

json session_state(const Session& s, const std::string& id) {
  const Program& p = s.current();
  json clauses = json::array();
  for (const auto& c : p.clauses()) {
    auto it = p.provenance().find(c.id);
    clauses.push_back({{"id", c.id},
                       {"text", to_string(c)},
                       {"provenance", it == p.provenance().end() ? "" : it->second}});
  }
  json history = json::array();
  for (std::size_t i = 0; i < s.history().size(); ++i) history.push_back(to_json(s.history()[i], i));
  return {{"id", id},
          {"revision", s.revision()},
          {"cursor", s.cursor()},
          {"program", to_string(p)},
          {"clauses", clauses},
          {"history", history},
          {"can_undo", s.can_undo()},
          {"can_redo", s.can_redo()}};
}

std::string describe(const Step& s) {
  std::ostringstream os;
  os << to_string(s.rule);
  switch (s.rule) {
    case RuleKind::Unfold:
    case RuleKind::DeleteGoal:
      os << ' ' << s.clause << " at " << s.index;
      break;
    case RuleKind::Fold:
      os << ' ' << s.clause << " [";
      for (std::size_t i = 0; i < s.positions.size(); ++i) os << (i ? "," : "") << s.positions[i];
      os << "] with " << to_string(s.folder.source) << ' ' << s.folder.clause_id;
      break;
    case RuleKind::IntroduceGoal:
      os << ' ' << s.clause;
      if (s.candidate) {
        os << " candidate #" << s.candidate->rank << ' ' << s.candidate->fingerprint;
      } else if (s.literal) {
        os << ' ' << to_string(*s.literal) << " at " << s.position;
      }
      break;
    case RuleKind::Define:
      for (const auto& c : s.clauses) os << ' ' << c;
      break;
    case RuleKind::ApplyLemma:
      os << ' ' << s.lemma << ' ' << to_string(s.orientation) << " on " << s.clause;
      if (s.match != 0) os << " match " << s.match;
      break;
    case RuleKind::RenamePredicate:
      os << ' ' << s.from.str() << " -> " << s.to.str();
      break;
    case RuleKind::DeleteClause:
      os << ' ' << s.clause << " (" << to_string(s.justification);
      if (!s.subsumer.empty()) os << " by " << s.subsumer;
      os << ')';
      break;
  }
  return os.str();
}

std::vector<std::int64_t> parse_domain(const std::string& text) {
  std::vector<std::int64_t> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad domain element '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty domain");
  return out;
}

Api::Api(const Corpus& corpus, VerifyOptions verify) : corpus_(corpus), verify_(std::move(verify)) {}

std::shared_ptr<Api::Slot> Api::find(const std::string& id) {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse Api::handle(const std::string& method, const std::string& path, const QueryParams& query,
                        const std::string& body) {
  json req = json::object();
  if (!body.empty()) {
    try {
      req = json::parse(body);
    } catch (const json::exception& e) {
      return error_response(400, "InvalidArgument", std::string("body is not valid JSON: ") + e.what());
    }
    if (!req.is_object()) return error_response(400, "InvalidArgument", "body must be a JSON object");
  }
  const auto parts = split_path(path);
  try {
    if (parts.size() == 1 && parts[0] == "sessions" && method == "POST") return create(req);
    if (parts.size() == 1 && parts[0] == "sessions" && method == "GET") {
      std::shared_lock lock(sessions_mutex_);
      json ids = json::array();
      for (const auto& [id, _] : sessions_) ids.push_back(id);
      return {200, {{"sessions", ids}}};
    }
    if (parts.size() >= 2 && parts[0] == "sessions") {
      return session_route(method, parts[1], parts.size() > 2 ? parts[2] : "", query, req);
    }
    if (!parts.empty() && parts[0] == "corpus" && method == "GET") return corpus_route(parts);
    return error_response(404, "NotFound", "no route " + method + " " + path);
  } catch (const Error& e) {
    return error_response(status_for(e.code()), std::string(to_string(e.code())), e.what());
  } catch (const json::exception& e) {
    return error_response(400, "InvalidArgument", e.what());
  }
}

ApiResponse Api::create(const json& req) {
  Program base;
  std::string origin;
  if (req.contains("base")) {
    origin = req.at("base").get<std::string>();
    base = corpus_.program(origin);
  } else if (req.contains("program")) {
    base = parse_program(req.at("program").get<std::string>(), "session");
  } else {
    return error_response(400, "InvalidArgument", "give either 'base' or 'program'");
  }
  Session s(std::move(base), corpus_.lemmas());
  s.set_origin(origin);
  std::string id;
  {
    std::unique_lock lock(sessions_mutex_);
    id = "s" + std::to_string(next_id_++);
    sessions_[id] = std::make_shared<Slot>(std::move(s));
  }
  auto slot = find(id);
  std::lock_guard guard(slot->mutex);
  return {201, session_state(slot->session, id)};
}

ApiResponse Api::session_route(const std::string& method, const std::string& id, const std::string& action,
                               const QueryParams& query, const json& req) {
  auto slot = find(id);
  if (!slot) return error_response(404, "UnknownSession", "no session " + id);
  if (method == "DELETE" && action.empty()) {
    std::unique_lock lock(sessions_mutex_);
    sessions_.erase(id);
    return {200, {{"deleted", id}}};
  }
  std::lock_guard guard(slot->mutex);
  Session& s = slot->session;

  auto check_revision = [&]() -> std::optional<ApiResponse> {
    if (!req.contains("revision")) return error_response(400, "InvalidArgument", "request must cite 'revision'");
    const auto seen = req.at("revision").get<std::uint64_t>();
    if (seen != s.revision()) {
      return ApiResponse{409,
                         {{"error",
                           {{"code", "RevisionConflict"},
                            {"message", "revision " + std::to_string(seen) + " is stale; current is " +
                                            std::to_string(s.revision())}}},
                          {"revision", s.revision()}}};
    }
    return std::nullopt;
  };

  if (method == "GET" && action.empty()) return {200, session_state(s, id)};
  if (method == "GET" && action == "export") return {200, to_json(export_script(s, param(query, "name", id)))};
  if (method == "GET" && action == "fold-matches") {
    const std::string clause = param(query, "clause");
    FolderRef ref{parse_folder_source(param(query, "source", "base")), param(query, "folder")};
    std::vector<FolderRef> refs;
    if (ref.clause_id.empty()) {
      refs = default_folders(s.current(), s.folder_context(), clause);
    } else {
      refs.push_back(ref);
    }
    json out = json::array();
    for (const auto& r : refs) {
      const Clause& folder = resolve_folder(r, s.current(), s.folder_context());
      for (const auto& m : find_fold_matches(s.current(), clause, folder)) {
        out.push_back({{"folder", folder_json(r)},
                       {"positions", m.positions},
                       {"substitution", substitution_json(m.substitution)}});
      }
    }
    return {200, {{"revision", s.revision()}, {"clause", clause}, {"matches", out}}};
  }
  if (method == "GET" && action == "candidates") {
    const std::string clause = param(query, "clause");
    json out = json::array();
    int rank = 0;
    for (const auto& c : s.candidates(clause)) out.push_back(to_json(c, rank++));
    json body{{"revision", s.revision()}, {"clause", clause}, {"candidates", out}};
    if (out.empty()) body["explanation"] = "no folder partially matches";
    return {200, body};
  }
  if (method != "POST") return error_response(404, "NotFound", "no route " + method + " " + action);

  if (action == "apply") {
    if (auto conflict = check_revision()) return *conflict;
    Step step = step_from_json(req.at("step"));
    if (req.value("truncate", false)) s.truncate();
    std::optional<VerifyOptions> verify;
    if (req.value("verify", false)) verify = verify_;
    s.apply(step, verify);
    return {200, session_state(s, id)};
  }
  if (action == "undo" || action == "redo") {
    if (auto conflict = check_revision()) return *conflict;
    if (action == "undo") {
      s.undo();
    } else {
      s.redo();
    }
    return {200, session_state(s, id)};
  }
  if (action == "verify") {
    VerifyOptions o = verify_;
    if (req.contains("domain")) o.domain = req.at("domain").get<std::vector<std::int64_t>>();
    if (req.contains("max_list_len")) o.max_list_len = req.at("max_list_len").get<int>();
    if (req.contains("lemma")) {
      const std::string lemma = req.at("lemma").get<std::string>();
      auto it = s.lemmas().find(lemma);
      if (it == s.lemmas().end()) throw Error(ErrorCode::UnknownLemma, "no lemma named '" + lemma + "'");
      auto v = check_lemma(it->second, s.current(), o.domain, o.max_list_len, o.limits);
      json ces = json::array();
      for (const auto& c : v.counterexamples) ces.push_back(substitution_json(c));
      return {200, {{"lemma", lemma}, {"holds", v.holds}, {"instances", v.instances}, {"counterexamples", ces}}};
    }
    const std::size_t index = req.value("index", s.cursor());
    const ExtensionDiff& d = s.verify_entry(index, o);
    return {200, {{"revision", s.revision()}, {"index", index}, {"diff", to_json(d)}}};
  }
  return error_response(404, "NotFound", "no route POST " + action);
}

ApiResponse Api::corpus_route(const std::vector<std::string>& parts) {
  if (parts.size() == 1) {
    return {200,
            {{"programs", corpus_.program_names()},
             {"lemmas", corpus_.lemma_names()},
             {"scripts", corpus_.script_names()}}};
  }
  if (parts.size() != 3) return error_response(404, "NotFound", "corpus routes are /corpus/<kind>/<name>");
  const std::string& kind = parts[1];
  const std::string& name = parts[2];
  if (kind == "programs") {
    const std::string& source = corpus_.program_source(name);
    return {200,
            {{"name", name},
             {"source", source},
             {"requires", corpus_.program_requires(name)},
             {"program", to_string(corpus_.program(name))}}};
  }
  if (kind == "lemmas") {
    const CorpusLemma& l = corpus_.lemma(name);
    return {200,
            {{"id", name},
             {"title", l.title},
             {"kind", to_string(l.lemma.kind)},
             {"text", to_string(l.lemma)},
             {"requires", l.requires_programs}}};
  }
  if (kind == "scripts") return {200, json::parse(corpus_.script_source(name))};
  return error_response(404, "NotFound", "unknown corpus kind " + kind);
}

}  // namespace lpt
