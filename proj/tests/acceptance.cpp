// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpt/abduce.hpp"
#include "lpt/corpus.hpp"
#include "lpt/derivation.hpp"
#include "lpt/engine.hpp"
#include "lpt/error.hpp"
#include "lpt/parser.hpp"
#include "lpt/rules.hpp"
#include "lpt/verify.hpp"

using namespace lpt;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<std::string> kScripts{"tamaki_sato", "insertion", "selection", "mergesort", "quicksort"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

Script load_script(const std::string& name) { return parse_script(Corpus::builtin().script_source(name)); }

/// The sorting predicate after any renames.
std::string goal_of(const ReplayResult& r) { return r.session.current_entry().goal.name; }

Outcome golden() {
  auto t0 = Clock::now();
  int ok = 0;
  std::string failed;
  for (const auto& name : kScripts) {
    ReplayResult r = replay(load_script(name), Corpus::builtin());
    if (r.matches_expected) {
      ++ok;
    } else {
      failed += " " + name;
    }
  }
  double t = seconds_since(t0);
  return {ok == 5 && t < 5.0, std::to_string(ok) + "/5 match, " + fmt_seconds(t) + (failed.empty() ? "" : ";" + failed)};
}

// All permutations of `xs` that are nondecreasing, by exhaustive search.
std::set<std::vector<std::int64_t>> brute_sorted(std::vector<std::int64_t> xs) {
  std::set<std::vector<std::int64_t>> out;
  std::sort(xs.begin(), xs.end());
  do {
    bool ordered = true;
    for (std::size_t i = 1; i < xs.size(); ++i) ordered = ordered && xs[i - 1] <= xs[i];
    if (ordered) out.insert(xs);
  } while (std::next_permutation(xs.begin(), xs.end()));
  return out;
}

std::vector<std::vector<std::int64_t>> all_lists(const std::vector<std::int64_t>& domain, int max_len) {
  std::vector<std::vector<std::int64_t>> out{{}};
  std::vector<std::vector<std::int64_t>> layer{{}};
  for (int n = 1; n <= max_len; ++n) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& l : layer) {
      for (auto d : domain) {
        next.push_back(l);
        next.back().push_back(d);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

Outcome sorting_oracle() {
  auto t0 = Clock::now();
  std::vector<std::pair<std::string, Program>> sorters{{"sort", Corpus::builtin().program("naive_sort")}};
  for (const auto& name : kScripts) {
    ReplayResult r = replay(load_script(name), Corpus::builtin());
    sorters.emplace_back(goal_of(r), r.final_program());
  }
  auto lists = all_lists({0, 1, 2}, 4);
  int agree = 0;
  int total = 0;
  std::string first_bad;
  for (const auto& [pred, program] : sorters) {
    Solver solver(program);
    for (const auto& l : lists) {
      ++total;
      Literal q = Literal::atom(pred, {Term::int_list(l), Term::var("X")});
      AnswerSet a = solver.solve({q});
      std::set<std::vector<std::int64_t>> got;
      for (const auto& s : a.answers) {
        const Term* x = s.lookup(Var{"X"});
        auto items = x ? x->list_items() : std::nullopt;
        std::vector<std::int64_t> xs;
        for (const auto& t : items.value_or(std::vector<Term>{Term::var("?")})) {
          xs.push_back(t.is_integer() ? t.value() : -1);
        }
        got.insert(xs);
      }
      if (a.exhausted && got == brute_sorted(l)) {
        ++agree;
      } else if (first_bad.empty()) {
        first_bad = "; first mismatch " + to_string(q);
      }
    }
  }
  double t = seconds_since(t0);
  return {agree == total && lists.size() == 121 && t < 60.0,
          std::to_string(sorters.size()) + " programs x " + std::to_string(lists.size()) + " lists, " +
              std::to_string(agree) + "/" + std::to_string(total) + " agree, " + fmt_seconds(t) + first_bad};
}

Outcome lemma_suite() {
  const Corpus& c = Corpus::builtin();
  int ok = 0;
  std::size_t instances = 0;
  std::string failed;
  const std::vector<std::string> ids{"append", "append_element", "insert", "minlist", "merging", "minlist_transfer"};
  for (const auto& id : ids) {
    auto v = check_lemma(c.lemma(id).lemma, c.lemma_context(id), {0, 1, 2}, 3);
    instances += v.instances;
    if (v.holds && v.counterexamples.empty()) {
      ++ok;
    } else {
      failed += " " + id;
    }
  }
  return {ok == static_cast<int>(ids.size()), std::to_string(ok) + "/" + std::to_string(ids.size()) + " hold over " +
                                                  std::to_string(instances) + " instances" +
                                                  (failed.empty() ? "" : ";" + failed)};
}

Outcome step_audit() {
  VerifyOptions v{{0, 1}, 3, {}};
  int steps = 0;
  int audited = 0;
  int equal = 0;
  std::string failed;
  for (const auto& name : kScripts) {
    ReplayResult r = replay(load_script(name), Corpus::builtin(), v);
    const auto& h = r.session.history();
    for (std::size_t i = 1; i < h.size(); ++i) {
      ++steps;
      if (!h[i].diff) continue;
      ++audited;
      if (h[i].diff->verdict == Verdict::Equal) {
        ++equal;
      } else if (failed.empty()) {
        failed = "; " + name + " step " + std::to_string(i) + " " + to_string(h[i].diff->verdict);
      }
    }
  }
  return {steps > 0 && audited == steps && equal == steps,
          std::to_string(audited) + "/" + std::to_string(steps) + " audited, " + std::to_string(equal) + " equal" +
              failed};
}

Outcome complexity() {
  const Corpus& c = Corpus::builtin();
  auto naive = step_profile(c.program("naive_sort"), "sort", {1, 2, 3, 4, 5, 6});
  bool ok = true;
  for (std::size_t i = 0; i < naive.rows.size(); ++i) {
    const auto& row = naive.rows[i];
    ok = ok && !row.censored && row.answers == 1;
    if (i > 0) ok = ok && row.steps > naive.rows[i - 1].steps;
    if (row.n >= 4) ok = ok && row.steps >= (row.n - 1) * naive.rows[i - 1].steps;
  }
  const std::int64_t bound = naive.rows.back().steps;
  std::ostringstream detail;
  detail << "naive(1..6)=";
  for (const auto& row : naive.rows) detail << row.steps << (row.n < 6 ? "," : "");
  for (const char* name : {"mergesort", "selection", "insertion"}) {
    ReplayResult r = replay(load_script(name), c);
    auto p = step_profile(r.final_program(), goal_of(r), {8});
    const auto& row = p.rows[0];
    ok = ok && !row.censored && row.answers == 1 && row.steps < bound;
    detail << " " << goal_of(r) << "(8)=" << row.steps;
  }
  return {ok, detail.str()};
}

Outcome abduction() {
  int slots = 0;
  int first = 0;
  for (const char* name : {"tamaki_sato", "selection", "mergesort"}) {
    Script script = load_script(name);
    ReplayResult r = replay(script, Corpus::builtin());
    const auto& h = r.session.history();
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
      const Step& s = script.steps[i];
      if (s.rule != RuleKind::IntroduceGoal || !s.candidate || s.label.empty()) continue;
      ++slots;
      // Rank afresh at the state recorded before the step.
      const HistoryEntry& before = h[i];
      FolderContext ctx{&before.base_view, &before.new_definitions};
      auto ranked = rank_candidates(before.program, ctx, s.clause, default_folders(before.program, ctx, s.clause));
      if (!ranked.empty() && ranked.front().fingerprint() == h[i + 1].chosen->fingerprint()) ++first;
    }
  }
  return {slots == 4 && first == 4, std::to_string(first) + "/" + std::to_string(slots) + " slots rank first"};
}

Outcome thinning() {
  Program naive = Corpus::builtin().program("naive_sort");
  std::string rec;
  for (const auto& c : naive.clauses()) {
    if (c.head.predicate() == "perm1" && !c.body.empty()) rec = c.id;
  }
  Program thin = introduce_goal(naive, rec, parse_literal("1 < 0"), 0).program;
  const PredicateKey sort{"sort", 2};
  auto nonempty = [](const Literal& a) { return a.args()[0].is_cons(); };
  auto d = compare_extensions(naive, sort, thin, sort, {0, 1}, 3, {}, nonempty);
  return {d.verdict == Verdict::Thinned && d.imploded,
          "verdict " + to_string(d.verdict) + ", imploded " + (d.imploded ? "true" : "false") + ", " +
              std::to_string(d.missing.size()) + " atoms lost"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden derivations", golden},       {"sorting oracle", sorting_oracle}, {"lemma suite", lemma_suite},
      {"step audit", step_audit},           {"complexity ordering", complexity}, {"abduction reproduction", abduction},
      {"thinning detector", thinning},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  %-24s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
