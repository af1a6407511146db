#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lpt/error.hpp"
#include "lpt/parser.hpp"
#include "lpt/service.hpp"

namespace lpt {

using nlohmann::json;

namespace {

struct Usage : Error {
  explicit Usage(const std::string& m) : Error(ErrorCode::InvalidArgument, m) {}
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Usage("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool is_file(const std::string& s) { return std::filesystem::is_regular_file(s); }

Program load_program(const Corpus& c, const std::string& ref) {
  if (c.has_program(ref)) return c.program(ref);
  if (is_file(ref)) return parse_program(slurp(ref), std::filesystem::path(ref).stem().string());
  throw Error(ErrorCode::UnknownEntry, "no corpus program or file named '" + ref + "'");
}

Script load_script(const Corpus& c, const std::string& ref) {
  if (is_file(ref)) return parse_script(slurp(ref));
  Script s = parse_script(c.script_source(ref));
  if (s.name.empty()) s.name = ref;
  return s;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  const auto dash = text.find('-');
  try {
    if (dash != std::string::npos && text.find(',') == std::string::npos) {
      const int lo = std::stoi(text.substr(0, dash));
      const int hi = std::stoi(text.substr(dash + 1));
      for (int n = lo; n <= hi; ++n) out.push_back(n);
      return out;
    }
    for (auto v : parse_domain(text)) out.push_back(static_cast<int>(v));
  } catch (const std::invalid_argument&) {
    throw Usage("bad sizes '" + text + "'");
  }
  return out;
}

std::string bindings_text(const Substitution& s) {
  if (s.empty()) return "true";
  std::string out;
  for (const auto& [v, t] : s.bindings()) {
    if (!out.empty()) out += ", ";
    out += to_string(Term::var(v)) + " = " + to_string(t);
  }
  return out;
}

struct Options {
  std::string domain = "0,1,2";
  bool domain_given = false;
  int max_list_len = 3;
  std::int64_t max_steps = SolveLimits{}.max_steps;
  std::string format = "text";
  std::string corpus_dir;

  SolveLimits limits() const {
    SolveLimits l;
    l.max_steps = max_steps;
    l.validate();
    return l;
  }
  VerifyOptions verify(const std::string& fallback_domain) const {
    return VerifyOptions{parse_domain(domain_given ? domain : fallback_domain), max_list_len, limits()};
  }
  bool json() const { return format == "json"; }
};

int cmd_run(const Corpus& c, const Options& o, const std::string& program, const std::string& query,
            std::int64_t max_answers, std::ostream& out) {
  Program p = load_program(c, program);
  auto goal = parse_conjunction(query);
  SolveLimits l = o.limits();
  l.max_answers = max_answers;
  AnswerSet a = solve(p, goal, l);
  if (o.json()) {
    out << to_json(a).dump(2) << '\n';
    return 0;
  }
  for (const auto& s : a.answers) out << bindings_text(s) << '\n';
  if (a.answers.empty()) out << (a.exhausted ? "false" : "no answer within limits") << '\n';
  return 0;
}

int cmd_replay(const Corpus& c, const Options& o, std::vector<std::string> scripts, bool verify, bool show,
               std::ostream& out) {
  if (scripts.size() == 1 && scripts[0] == "all") scripts = c.script_names();
  int status = 0;
  json all = json::array();
  for (const auto& ref : scripts) {
    Script script = load_script(c, ref);
    std::optional<VerifyOptions> vo;
    if (verify) vo = o.verify("0,1");
    ReplayResult r = [&] {
      try {
        return replay(script, c, vo);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Syntax || e.code() == ErrorCode::UnknownEntry) throw;
        throw std::runtime_error(script.name + ": " + e.what());
      }
    }();
    const auto& h = r.session.history();
    bool audit_ok = true;
    for (std::size_t i = 1; i < h.size(); ++i) {
      if (h[i].diff && h[i].diff->verdict != Verdict::Equal) audit_ok = false;
    }
    if ((r.has_expected && !r.matches_expected) || !audit_ok) status = 1;
    if (o.json()) {
      json j = session_state(r.session, script.name);
      j["name"] = script.name;
      j["has_expected"] = r.has_expected;
      j["matches_expected"] = r.matches_expected;
      j["audit_ok"] = audit_ok;
      all.push_back(j);
      continue;
    }
    out << "replay " << script.name << '\n';
    for (std::size_t i = 1; i < h.size(); ++i) {
      out << std::setw(4) << i << "  " << describe(*h[i].step) << "  [" << to_string(h[i].safety);
      if (h[i].diff) out << ", " << to_string(h[i].diff->verdict) << " on " << h[i].audited->second.str();
      out << "]\n";
      if (h[i].diff && h[i].diff->verdict != Verdict::Equal) out << "      " << to_string(*h[i].diff) << '\n';
    }
    if (show) {
      out << "final program:\n";
      for (const auto& cl : r.final_program().clauses()) {
        out << "  " << std::left << std::setw(14) << cl.id << std::right << ' ' << to_string(cl) << '\n';
      }
    }
    if (r.has_expected) out << "matches expected: " << (r.matches_expected ? "true" : "false") << '\n';
    if (verify) out << "audit: " << (audit_ok ? "all steps equal" : "some steps differ") << '\n';
  }
  if (o.json()) out << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
  return status;
}

int cmd_verify(const Corpus& c, const Options& o, const std::string& lemma, const std::vector<std::string>& compare,
               const std::string& pred, const std::string& pred_after, std::ostream& out) {
  const VerifyOptions vo = o.verify("0,1,2");
  if (!lemma.empty()) {
    const Lemma& l = c.lemma(lemma).lemma;
    auto v = check_lemma(l, c.lemma_context(lemma), vo.domain, vo.max_list_len, vo.limits);
    if (o.json()) {
      json ces = json::array();
      for (const auto& s : v.counterexamples) ces.push_back(bindings_text(s));
      out << json{{"lemma", lemma}, {"holds", v.holds}, {"instances", v.instances}, {"counterexamples", ces}}.dump(2)
          << '\n';
    } else {
      out << to_string(l) << '\n'
          << (v.holds ? "holds" : "fails") << " over " << v.instances << " instances\n";
      for (const auto& s : v.counterexamples) out << "  counterexample: " << bindings_text(s) << '\n';
    }
    return v.holds ? 0 : 1;
  }
  if (compare.size() != 2) throw Usage("verify needs --lemma ID or --compare BEFORE AFTER");
  Program before = load_program(c, compare[0]);
  Program after = load_program(c, compare[1]);
  const PredicateKey kb = pred.empty() ? before.clauses().at(0).head.key() : parse_predicate_key(pred);
  const PredicateKey ka = pred_after.empty() ? (pred.empty() ? after.clauses().at(0).head.key() : kb)
                                             : parse_predicate_key(pred_after);
  auto d = compare_extensions(before, kb, after, ka, vo.domain, vo.max_list_len, vo.limits);
  if (o.json()) {
    out << to_json(d).dump(2) << '\n';
  } else {
    out << kb.str() << " vs " << ka.str() << ": " << to_string(d) << '\n';
  }
  return d.verdict == Verdict::Equal ? 0 : 1;
}

int cmd_bench(const Corpus& c, const Options& o, const std::vector<std::string>& programs, const std::string& sizes,
              const std::string& pred, std::ostream& out) {
  const auto ns = parse_sizes(sizes);
  int status = 0;
  json all = json::array();
  for (const auto& ref : programs) {
    Program p = load_program(c, ref);
    const std::string name = pred.empty() ? p.clauses().at(0).head.predicate() : pred;
    StepProfile prof = step_profile(p, name, ns, o.limits());
    for (const auto& r : prof.rows) {
      if (r.censored) status = 1;
    }
    if (o.json()) {
      json j = to_json(prof);
      j["program"] = ref;
      all.push_back(j);
    } else {
      out << ref << ": " << to_table(prof) << '\n';
    }
  }
  if (o.json()) out << all.dump(2) << '\n';
  return status;
}

int cmd_candidates(const Corpus& c, const Options& o, const std::string& script_ref, int steps,
                   const std::string& clause, std::ostream& out) {
  Script script = load_script(c, script_ref);
  if (steps >= 0) {
    if (steps > static_cast<int>(script.steps.size())) throw Usage("script has fewer steps");
    script.steps.resize(steps);
  }
  script.expected_final.clear();
  ReplayResult r = replay(script, c);
  auto cands = r.session.candidates(clause);
  if (o.json()) {
    json arr = json::array();
    for (std::size_t i = 0; i < cands.size(); ++i) arr.push_back(to_json(cands[i], static_cast<int>(i)));
    out << arr.dump(2) << '\n';
    return 0;
  }
  out << to_string(*r.final_program().find(clause)) << '\n';
  if (cands.empty()) out << "no folder partially matches\n";
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& k = cands[i];
    const auto& s = k.scores;
    out << '#' << i << ' ' << to_string(k.literal) << " at " << k.insert_position << ", fold [";
    for (std::size_t j = 0; j < k.fold_positions.size(); ++j) out << (j ? "," : "") << k.fold_positions[j];
    out << "] with " << to_string(k.folder.source) << ' ' << k.folder.clause_id
        << "  well_founded=" << s.well_founded << " successful_path=" << s.successful_path
        << " coordination=" << s.variable_coordination << " unlinked=" << s.unlinked_variables
        << " self=" << s.self_referential << " size=" << s.size_penalty << '\n';
  }
  return 0;
}

int cmd_corpus(const Corpus& c, const Options& o, const std::string& action, const std::string& name,
               std::ostream& out) {
  if (action == "list") {
    if (o.json()) {
      out << json{{"programs", c.program_names()}, {"lemmas", c.lemma_names()}, {"scripts", c.script_names()}}.dump(2)
          << '\n';
      return 0;
    }
    auto row = [&](const char* kind, const std::vector<std::string>& names) {
      out << kind << ':';
      for (const auto& n : names) out << ' ' << n;
      out << '\n';
    };
    row("programs", c.program_names());
    row("lemmas", c.lemma_names());
    row("scripts", c.script_names());
    return 0;
  }
  if (name.empty()) throw Usage("corpus " + action + " needs a name");
  if (action == "show") {
    if (c.has_program(name)) {
      out << to_string(c.program(name)) << '\n';
    } else if (auto lemmas = c.lemma_names(); std::find(lemmas.begin(), lemmas.end(), name) != lemmas.end()) {
      out << to_string(c.lemma(name).lemma) << '\n';
    } else {
      out << c.script_source(name);
    }
    return 0;
  }
  if (action == "export") {
    c.export_to(name);
    out << "exported to " << name << '\n';
    return 0;
  }
  throw Usage("unknown corpus action '" + action + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unfold/fold transformation workbench for logic programs", "lpt"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  auto* domain_opt = app.add_option("--domain", o.domain, "Integers for bounded checks, e.g. \"0,1,2\"");
  app.add_option("--max-list-len", o.max_list_len, "Longest list in bounded checks")->check(CLI::NonNegativeNumber);
  app.add_option("--max-steps", o.max_steps, "Resolution step budget per query")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--corpus", o.corpus_dir, "Read the corpus from a directory instead of the built-in one");

  std::string program, query;
  std::int64_t max_answers = 10;
  auto* run = app.add_subcommand("run", "Solve a query against a program");
  run->add_option("program", program, "Corpus program name or .pl file")->required();
  run->add_option("-q,--query", query, "Query conjunction")->required();
  run->add_option("--max-answers", max_answers)->check(CLI::PositiveNumber);

  std::vector<std::string> scripts;
  bool verify_steps = false, show = false;
  auto* rep = app.add_subcommand("replay", "Replay derivation scripts");
  rep->add_option("scripts", scripts, "Script names, .json files, or 'all'")->required();
  rep->add_flag("--verify", verify_steps, "Compare extensions before and after every step");
  rep->add_flag("--show", show, "Print the final program");

  std::string lemma, pred, pred_after;
  std::vector<std::string> compare;
  auto* ver = app.add_subcommand("verify", "Check a lemma or compare two programs");
  ver->add_option("--lemma", lemma, "Corpus lemma id");
  ver->add_option("--compare", compare, "BEFORE AFTER programs")->expected(2);
  ver->add_option("--pred", pred, "Predicate as name/arity");
  ver->add_option("--pred-after", pred_after, "Predicate in AFTER when renamed");

  std::vector<std::string> bench_programs;
  std::string sizes = "1-6", bench_pred;
  auto* bench = app.add_subcommand("bench", "Resolution steps on reversed inputs");
  bench->add_option("programs", bench_programs)->required();
  bench->add_option("--sizes", sizes, "List lengths, \"1-6\" or \"1,2,8\"");
  bench->add_option("--pred", bench_pred, "Sort predicate name; defaults to the first clause's");

  std::string cand_script, clause;
  int upto = -1;
  auto* cand = app.add_subcommand("candidates", "Rank abductive candidates at a script state");
  cand->add_option("script", cand_script)->required();
  cand->add_option("--clause", clause)->required();
  cand->add_option("--steps", upto, "Replay only this many steps first");

  std::string host = "127.0.0.1";
  int port = 8080;
  if (const char* env = std::getenv("LPT_PORT")) {
    try {
      port = std::stoi(env);
    } catch (const std::exception&) {
      err << "ignoring LPT_PORT=" << env << '\n';
    }
  }
  auto* srv = app.add_subcommand("serve", "Start the HTTP API");
  srv->add_option("--port", port)->check(CLI::Range(1, 65535));
  srv->add_option("--host", host);

  std::string corpus_action, corpus_name;
  auto* cor = app.add_subcommand("corpus", "List, show or export corpus entries");
  cor->add_option("action", corpus_action)->required()->check(CLI::IsMember({"list", "show", "export"}));
  cor->add_option("name", corpus_name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  o.domain_given = domain_opt->count() > 0;

  try {
    Corpus loaded;
    if (!o.corpus_dir.empty()) loaded = Corpus::from_directory(o.corpus_dir);
    const Corpus& c = o.corpus_dir.empty() ? Corpus::builtin() : loaded;
    if (*run) return cmd_run(c, o, program, query, max_answers, out);
    if (*rep) return cmd_replay(c, o, scripts, verify_steps, show, out);
    if (*ver) return cmd_verify(c, o, lemma, compare, pred, pred_after, out);
    if (*bench) return cmd_bench(c, o, bench_programs, sizes, bench_pred, out);
    if (*cand) return cmd_candidates(c, o, cand_script, upto, clause, out);
    if (*cor) return cmd_corpus(c, o, corpus_action, corpus_name, out);
    if (*srv) {
      Api api(c, o.verify("0,1"));
      HttpServer server(api);
      if (server.bind(host, port) < 0) {
        err << "error: cannot listen on " << host << ':' << port << '\n';
        return 2;
      }
      err << "listening on http://" << host << ':' << port << std::endl;
      return server.run() ? 0 : 1;
    }
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::UnknownEntry ||
                       e.code() == ErrorCode::UnknownLemma || e.code() == ErrorCode::UnknownPredicate;
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace lpt
