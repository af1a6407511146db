#include <algorithm>
#include <filesystem>

#include "doctest.h"
#include "lpt/abduce.hpp"
#include "lpt/corpus.hpp"
#include "lpt/derivation.hpp"
#include "lpt/engine.hpp"
#include "lpt/error.hpp"
#include "lpt/parser.hpp"

using namespace lpt;

TEST_CASE("builtin corpus loads every program and lemma") {
  const Corpus& c = Corpus::builtin();
  CHECK(c.program_names().size() >= 20);
  for (const auto& name : c.program_names()) {
    CAPTURE(name);
    CHECK_NOTHROW(c.program(name));
  }
  CHECK(c.lemma_names().size() == 8);
  for (const auto& id : c.lemma_names()) {
    CAPTURE(id);
    CHECK_NOTHROW(c.lemma_context(id));
    CHECK_FALSE(c.lemma(id).title.empty());
  }
}

TEST_CASE("requires pulls dependencies in once") {
  const Corpus& c = Corpus::builtin();
  CHECK(c.program_requires("naive_sort") == std::vector<std::string>{"perm1", "ord1"});
  Program p = c.program("naive_sort");
  CHECK(p.clauses().front().head.predicate() == "sort");
  CHECK(p.defines(PredicateKey{"insert", 3}));
  CHECK(p.defines(PredicateKey{"ord1", 1}));
  Program both = c.programs({"naive_sort", "perm1"}, "x");
  CHECK(both.clauses().size() == p.clauses().size());
  CHECK_THROWS_AS(c.program("nosuch"), Error);
  CHECK_THROWS_AS(c.lemma("nosuch"), Error);
}

TEST_CASE("parse_lemma_json") {
  std::string title;
  std::vector<std::string> req;
  Lemma l = parse_lemma_json(
      R"j({"id":"x","title":"X","kind":"equivalence","side":"","lhs":"p(A)","rhs":"q(A)","requires":["a"]})j", &title,
      &req);
  CHECK(l.kind == LemmaKind::Equivalence);
  CHECK(l.side_conditions.empty());
  CHECK(title == "X");
  CHECK(req == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(parse_lemma_json("{"), Error);
  CHECK_THROWS_AS(parse_lemma_json(R"j({"id":"x","kind":"maybe","lhs":"p(A)","rhs":"q(A)"})j"), Error);
  CHECK_THROWS_AS(parse_lemma_json(R"j({"id":"x","lhs":"p(A)","rhs":"q(B)"})j"), Error);
}

TEST_CASE("export and reload round trip") {
  const Corpus& c = Corpus::builtin();
  auto dir = std::filesystem::temp_directory_path() / "lpt_corpus_roundtrip";
  std::filesystem::remove_all(dir);
  c.export_to(dir);
  Corpus back = Corpus::from_directory(dir);
  CHECK(back.program_names() == c.program_names());
  CHECK(back.lemma_names() == c.lemma_names());
  CHECK(back.script_names() == c.script_names());
  for (const auto& name : c.program_names()) CHECK(back.program_source(name) == c.program_source(name));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(Corpus::from_directory(dir), Error);
}

TEST_CASE("corpus entries named by the sorting derivations") {
  const Corpus& c = Corpus::builtin();
  CHECK(c.program("perm1").clauses().size() == 4);
  CHECK(c.program("shuffle").clauses().size() == 4);
  auto names = c.program_names();
  for (const char* n : {"perm1", "perm2", "perm3", "split", "shuffle", "ord1", "ord2", "minlist", "findmin", "filter",
                        "partition", "all_less", "all_leq", "append", "naive_sort", "sort_ts", "inssort", "selsort",
                        "msort", "qsort"}) {
    CAPTURE(n);
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  CHECK(c.lemma_names() == std::vector<std::string>{"append", "append_element", "corrupted_minlist", "insert",
                                                     "insert_append", "merging", "minlist", "minlist_transfer"});
  CHECK(c.script_names() == std::vector<std::string>{"insertion", "mergesort", "quicksort", "selection", "tamaki_sato"});
  CHECK(names == Corpus::builtin().program_names());
}

TEST_CASE("every script's base and expected final resolve") {
  const Corpus& c = Corpus::builtin();
  for (const auto& name : c.script_names()) {
    CAPTURE(name);
    Script s = parse_script(c.script_source(name));
    CHECK(s.name == name);
    CHECK(c.has_program(s.base));
    CHECK(c.has_program(s.expected_final));
  }
}

TEST_CASE("programs parse back to themselves and define live predicates") {
  const Corpus& c = Corpus::builtin();
  for (const auto& name : c.program_names()) {
    CAPTURE(name);
    Program p = c.program(name);
    CHECK(alpha_equivalent_programs(parse_program(to_string(p)), p));
    CHECK(weak_predicates(p).empty());
    for (const auto& key : p.predicates()) {
      CAPTURE(key.str());
      CHECK_FALSE(bounded_extension(p, key, {0, 1}, 2).atoms.empty());
    }
  }
}

TEST_CASE("findmin starts from neg_inf and min covers both orders") {
  Program p = Corpus::builtin().program("findmin");
  CHECK(to_string(p.clauses().front()) == "findmin(neg_inf,[]).");
  auto answers = solve(p, {parse_literal("findmin(X,[])")});
  REQUIRE(answers.answers.size() == 1);
  CHECK(to_string((*answers.answers[0].lookup(Var{"X"}))) == "neg_inf");
  for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
    auto r = solve(p, {parse_literal("min(" + std::to_string(a) + "," + std::to_string(b) + ",X)")});
    REQUIRE(r.answers.size() == 1);
    CHECK(*r.answers[0].lookup(Var{"X"}) == Term::integer(std::min(a, b)));
  }
}

TEST_CASE("filter places A and split halves the list") {
  const Corpus& c = Corpus::builtin();
  auto filter = bounded_extension(c.program("filter"), {"filter", 4}, {0, 1, 2}, 3);
  CHECK_FALSE(filter.atoms.empty());
  for (const auto& atom : filter.atoms) {
    CAPTURE(to_string(atom));
    std::int64_t a = atom.args()[0].value();
    auto low = *atom.args()[2].list_items();
    auto high = *atom.args()[3].list_items();
    for (const auto& t : low) CHECK(t.value() <= a);
    for (const auto& t : high) CHECK(a < t.value());
    CHECK(atom.args()[1].list_items()->size() == low.size() + high.size());
  }
  auto split = bounded_extension(c.program("split"), {"split", 3}, {0, 1}, 3);
  CHECK_FALSE(split.atoms.empty());
  for (const auto& atom : split.atoms) {
    CAPTURE(to_string(atom));
    auto n2 = atom.args()[1].list_items()->size();
    auto n3 = atom.args()[2].list_items()->size();
    CHECK((n2 == n3 || n2 + 1 == n3));
  }
}
