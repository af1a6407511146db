#include "doctest.h"
#include "lpt/corpus.hpp"
#include "lpt/error.hpp"
#include "lpt/parser.hpp"
#include "lpt/rules.hpp"
#include "lpt/verify.hpp"

using namespace lpt;

namespace {

const std::vector<std::int64_t> kDomain{0, 1, 2};

Program naive() { return Corpus::builtin().program("naive_sort"); }

std::string recursive_clause(const Program& p, const std::string& pred) {
  for (const auto& c : p.clauses()) {
    if (c.head.predicate() == pred && !c.body.empty()) return c.id;
  }
  return {};
}

}  // namespace

TEST_CASE("check_lemma: corpus properties hold") {
  const Corpus& corpus = Corpus::builtin();
  for (const char* id : {"append", "append_element", "insert", "minlist", "minlist_transfer"}) {
    CAPTURE(id);
    auto v = check_lemma(corpus.lemma(id).lemma, corpus.lemma_context(id), kDomain, 3);
    CHECK(v.holds);
    CHECK(v.counterexamples.empty());
    CHECK(v.instances > 0);
  }
  auto merging = check_lemma(corpus.lemma("merging").lemma, corpus.lemma_context("merging"), {0, 1}, 3);
  CHECK(merging.holds);
}

TEST_CASE("check_lemma: corrupted lemma fails with a counterexample") {
  const Corpus& corpus = Corpus::builtin();
  auto v = check_lemma(corpus.lemma("corrupted_minlist").lemma, corpus.lemma_context("corrupted_minlist"), kDomain, 3);
  CHECK_FALSE(v.holds);
  REQUIRE_FALSE(v.counterexamples.empty());
  CHECK(v.counterexamples.size() <= 10);
  for (const auto& s : v.counterexamples) CHECK_FALSE(s.empty());
}

TEST_CASE("check_lemma: errors") {
  Program p = parse_program("p(X) :- q(X). q(0).");
  Lemma bad{"l", {}, {parse_literal("p(X)")}, {parse_literal("r(X)")}, LemmaKind::Implication};
  CHECK_THROWS_AS(check_lemma(bad, p, {0}, 1), Error);
  Lemma unbound{"l", {}, {parse_literal("p(X)")}, {parse_literal("q(Y)")}, LemmaKind::Implication};
  CHECK_THROWS_AS(check_lemma(unbound, p, {0}, 1), Error);
  Lemma tiny{"l", {}, {parse_literal("p(X)")}, {parse_literal("q(X)")}, LemmaKind::Implication};
  CHECK_THROWS_AS(check_lemma(tiny, p, {0, 1}, 1, SolveLimits{0, 0, 0}), Error);
}

TEST_CASE("compare_extensions: naive and Tamaki-Sato sorters agree") {
  Program ts = Corpus::builtin().program("sort_ts");
  Program nv = naive();
  auto d = compare_extensions(nv, PredicateKey{"sort", 2}, ts, PredicateKey{"sort_TS", 2}, kDomain, 3);
  CHECK(d.verdict == Verdict::Equal);
  CHECK(d.missing.empty());
  CHECK(d.extra.empty());
  CHECK(compare_extensions(nv, nv, PredicateKey{"sort", 2}, kDomain, 3).verdict == Verdict::Equal);
}

TEST_CASE("compare_extensions: an impossible comparison thins the sorter") {
  Program nv = naive();
  const std::string rec = recursive_clause(nv, "perm1");
  Program thin = introduce_goal(nv, rec, parse_literal("1 < 0"), 0).program;
  auto d = compare_extensions(nv, thin, PredicateKey{"sort", 2}, {0, 1}, 3);
  CHECK(d.verdict == Verdict::Thinned);
  CHECK_FALSE(d.imploded);
  CHECK(d.extra.empty());
  for (const auto& a : d.missing) CHECK(to_string(a) != "sort([],[])");

  auto nonempty = [](const Literal& a) { return a.args()[0].is_cons(); };
  auto f = compare_extensions(nv, PredicateKey{"sort", 2}, thin, PredicateKey{"sort", 2}, {0, 1}, 3, {}, nonempty);
  CHECK(f.verdict == Verdict::Thinned);
  CHECK(f.imploded);
}

TEST_CASE("compare_extensions: swapping arguments swaps missing and extra") {
  Program a = parse_program("p(X) :- X =< 1.");
  Program b = parse_program("p(X) :- 1 =< X.");
  auto ab = compare_extensions(a, b, PredicateKey{"p", 1}, kDomain, 1);
  auto ba = compare_extensions(b, a, PredicateKey{"p", 1}, kDomain, 1);
  CHECK(ab.verdict == Verdict::Mixed);
  CHECK(ab.missing == ba.extra);
  CHECK(ab.extra == ba.missing);
  CHECK(to_string(ab.missing.begin()->args()[0]) == "0");
  CHECK(to_string(ab.extra.begin()->args()[0]) == "2");
}

TEST_CASE("compare_extensions: unsatisfiable builtin in every clause implodes") {
  Program p = parse_program("p(X) :- q(X). p(X) :- r(X). q(0). r(1).");
  Program q = p;
  for (const auto& c : p.clauses()) {
    if (c.head.predicate() == "p") q = introduce_goal(q, c.id, parse_literal("X < X"), 0).program;
  }
  auto d = compare_extensions(p, q, PredicateKey{"p", 1}, kDomain, 1);
  CHECK(d.imploded);
  CHECK(d.verdict == Verdict::Thinned);
  CHECK(d.missing.size() == 2);
}

TEST_CASE("step_profile: factorial growth of the naive sorter") {
  auto prof = step_profile(naive(), "sort", {1, 2, 3, 4, 5, 6});
  REQUIRE(prof.rows.size() == 6);
  for (std::size_t i = 1; i < prof.rows.size(); ++i) {
    CHECK_FALSE(prof.rows[i].censored);
    CHECK(prof.rows[i].steps > prof.rows[i - 1].steps);
    if (prof.rows[i].n >= 4) {
      CHECK(prof.rows[i].steps >= (prof.rows[i].n - 1) * prof.rows[i - 1].steps);
    }
  }
  auto msort = step_profile(Corpus::builtin().program("msort"), "msort", {8});
  CHECK(msort.rows[0].answers == 1);
  CHECK(msort.rows[0].steps < prof.rows[5].steps);
  CHECK(to_table(prof).find("steps") != std::string::npos);
}

TEST_CASE("step_profile: edge cases") {
  auto zero = step_profile(naive(), "sort", {0});
  REQUIRE(zero.rows.size() == 1);
  CHECK(zero.rows[0].n == 0);
  CHECK(zero.rows[0].steps > 0);
  CHECK(zero.rows[0].steps < 10);
  CHECK_THROWS_AS(step_profile(naive(), "sort", {}), Error);
  CHECK_THROWS_AS(step_profile(naive(), "sort", {3, 2}), Error);
  CHECK_THROWS_AS(step_profile(naive(), "nosuch", {1}), Error);
  auto cut = step_profile(naive(), "sort", {6}, SolveLimits{1000, 50, 1});
  CHECK(cut.rows[0].censored);
}
