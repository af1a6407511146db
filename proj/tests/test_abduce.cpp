#include "doctest.h"
#include "lpt/abduce.hpp"
#include "lpt/error.hpp"
#include "lpt/parser.hpp"

using namespace lpt;

namespace {

const std::string kSortTS = R"(
  sort_TS(Ls1, Ls2) :- perm1(Ls1, Ls2), ord1(Ls2).
  perm1([], []).
  perm1([A|Ls1], Ls3) :- perm1(Ls1, Ls2), insert(A, Ls2, Ls3).
  insert(A, Ls, [A|Ls]).
  insert(A, [B|Ls1], [B|Ls2]) :- insert(A, Ls1, Ls2).
  ord1([]).
  ord1([A]).
  ord1([A,B|Ls]) :- A =< B, ord1([B|Ls]).
)";

std::set<std::string> keys(const std::set<PredicateKey>& ks) {
  std::set<std::string> out;
  for (const auto& k : ks) out.insert(k.str());
  return out;
}

std::vector<std::string> texts(const std::vector<Literal>& ls) {
  std::vector<std::string> out;
  for (const auto& l : ls) out.push_back(to_string(l));
  return out;
}

}  // namespace

TEST_CASE("weak_predicates") {
  CHECK(keys(weak_predicates(parse_program("p :- q."))) == std::set<std::string>{"p/0", "q/0"});
  CHECK(weak_predicates(parse_program("p :- q. q.")).empty());
  CHECK(weak_predicates(parse_program("p(X, Y) :- X =< Y.")).empty());
  CHECK(keys(weak_predicates(parse_program("p :- q, r. p :- s. r. s :- t."))) ==
        std::set<std::string>{"p/0", "q/0", "s/0", "t/0"});
}

TEST_CASE("weak predicates have empty bounded extensions") {
  Program p = parse_program(R"(
    a(X) :- b(X), c(X). a(1).
    b(X) :- d(X).
    c(0).
    e([A|L]) :- b(A), e(L).
    f(L) :- e(L), c(0).
  )");
  auto weak = weak_predicates(p);
  CHECK(keys(weak) == std::set<std::string>{"b/1", "d/1", "e/1", "f/1"});
  for (const auto& k : weak) {
    CAPTURE(k.str());
    CHECK(bounded_extension(p, k, {0, 1, 2}, 2).atoms.empty());
  }
}

TEST_CASE("plain_complement: examples") {
  Clause target = parse_clause("t([A|Ls1], Ls3) :- perm1(Ls1, Ls2), insert(A, Ls2, Ls3), ord1(Ls3).", "t.1");
  Clause folder = parse_clause("sort_TS(L, M) :- perm1(L, M), ord1(M).", "sort_TS.1");
  auto cs = plain_complement(target, {0}, folder);
  REQUIRE(cs.size() == 1);
  CHECK(texts(cs[0].missing) == std::vector<std::string>{"ord1(Ls2)"});
  CHECK(cs[0].matched_positions == std::vector<int>{0});
  CHECK(cs[0].matched_folder_literals == std::vector<int>{0});

  auto pq = plain_complement(parse_clause("p :- q, t.", "p.1"), {0}, parse_clause("s :- q, r.", "s.1"));
  REQUIRE(pq.size() == 1);
  CHECK(texts(pq[0].missing) == std::vector<std::string>{"r"});

  auto full = plain_complement(parse_clause("p :- q, r, t.", "p.1"), {0, 1}, parse_clause("s :- q, r.", "s.1"));
  CHECK(full.front().missing.empty());

  CHECK_THROWS_AS(plain_complement(parse_clause("p :- t.", "p.1"), {0}, parse_clause("s :- q, r.", "s.1")), Error);
  try {
    plain_complement(parse_clause("p :- t.", "p.1"), {0}, parse_clause("s :- q, r.", "s.1"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPartialMatch);
  }
}

TEST_CASE("plain_complement: empty selection yields the whole renamed body") {
  Clause target = parse_clause("p(L, M) :- q(L, M).", "p.1");
  Clause folder = parse_clause("s(L) :- q(L, M), r(M).", "s.1");
  auto cs = plain_complement(target, {}, folder);
  REQUIRE(cs.size() == 1);
  REQUIRE(cs[0].missing.size() == 2);
  for (const auto& l : cs[0].missing) {
    for (const auto& v : vars_of(std::vector<Literal>{l})) CHECK(vars_of(target).count(v) == 0);
  }
  CHECK(variant(Clause{"", folder.head, cs[0].missing}, Clause{"", folder.head, folder.body}) == false);
  CHECK(variant(Clause{"", parse_literal("h"), cs[0].missing}, Clause{"", parse_literal("h"), folder.body}));
}

TEST_CASE("rank_candidates: successful path decides between folders") {
  Program p = parse_program("p :- q, t. s :- q, r. u :- m, t. r. q. t.");
  FolderContext ctx{&p, nullptr};
  std::vector<FolderRef> folders{{FolderSource::CurrentProgram, "s.1"}, {FolderSource::CurrentProgram, "u.1"}};
  auto cs = rank_candidates(p, ctx, "p.1", folders);
  REQUIRE(cs.size() == 2);
  CHECK(to_string(cs[0].literal) == "r");
  CHECK(cs[0].scores.successful_path);
  CHECK(to_string(cs[1].literal) == "m");
  CHECK_FALSE(cs[1].scores.successful_path);

  // Swapping folder order does not change the ranking.
  std::swap(folders[0], folders[1]);
  auto swapped = rank_candidates(p, ctx, "p.1", folders);
  CHECK(to_string(swapped[0].literal) == "r");

  CHECK(rank_candidates(p, ctx, "p.1", {}).empty());
  CHECK(classify(p, "p.1", cs[1], {0}, 1) == Occam::Underivable);
}

TEST_CASE("rank_candidates: Tamaki-Sato unfolded state") {
  Program base = parse_program(kSortTS);
  Program p = unfold(base, "sort_TS.1", 0).program;
  FolderContext ctx{&base, nullptr};
  const std::string clause = "sort_TS.1.2";
  auto folders = default_folders(p, ctx, clause);
  REQUIRE(folders.size() == 1);
  auto cs = rank_candidates(p, ctx, clause, folders);
  REQUIRE_FALSE(cs.empty());
  CHECK(to_string(cs[0].literal) == "ord1(Ls2)");
  CHECK(cs[0].insert_position == 1);
  CHECK(cs[0].fold_positions == std::vector<int>{0, 1});
  CHECK(cs[0].scores.well_founded);
  CHECK(cs[0].scores.enables_fold);
  CHECK(cs[0].fingerprint() == "ord1(Ls2)");
  for (std::size_t i = 1; i < cs.size(); ++i) CHECK(cs[i - 1].total <= cs[i].total);

  // Deterministic across runs.
  auto again = rank_candidates(p, ctx, clause, folders);
  REQUIRE(again.size() == cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) CHECK(again[i].fingerprint() == cs[i].fingerprint());

  CHECK(classify(p, clause, cs[0], {0, 1}, 3) == Occam::Deducible);
}

TEST_CASE("rank_candidates: every candidate enables its fold") {
  Program base = parse_program(kSortTS + "shuffle([], [], []). shuffle([A|X], Y, [A|Z]) :- shuffle(X, Y, Z).");
  Program p = unfold(base, "sort_TS.1", 0).program;
  p = define(p, {parse_clause("nd(X, Y, Z) :- insert(X, Y, Z), ord1(Z).", "")}).program;
  FolderContext ctx{&base, nullptr};
  Program news = parse_program("nd(X, Y, Z) :- insert(X, Y, Z), ord1(Z).");
  ctx.new_definitions = &news;
  int total = 0;
  for (const auto& c : p.clauses()) {
    auto folders = default_folders(p, ctx, c.id);
    for (const auto& cand : rank_candidates(p, ctx, c.id, folders)) {
      CAPTURE(c.id);
      CAPTURE(to_string(cand.literal));
      Program q = introduce_goal(p, c.id, cand.literal, cand.insert_position).program;
      CHECK_NOTHROW(fold(q, c.id, cand.fold_positions, resolve_folder(cand.folder, p, ctx)));
      ++total;
    }
  }
  CHECK(total >= 2);
}

TEST_CASE("well-founded order") {
  WellFoundedOrder o;
  CHECK(o.less(parse_term("Ls1"), parse_term("[A|Ls1]")));
  CHECK(o.less(parse_term("Ls2"), parse_term("[A,B|Ls1]")));
  CHECK(o.less(parse_term("Y"), parse_term("[A|Ls1]")));
  CHECK_FALSE(o.less(parse_term("[A|Ls1]"), parse_term("[A|Ls1]")));
  CHECK(WellFoundedOrder{false}.less(parse_term("[A|Ls1]"), parse_term("[A|Ls1]")));
  CHECK_FALSE(o.less(parse_term("f(X, Y)"), parse_term("g(a, b)")));
}

TEST_CASE("Occam classification") {
  Program p = parse_program("q(X) :- a(X), b(X). a(0). a(1). b(1). b(2).");
  auto make = [](const std::string& text, int pos) {
    AbductiveCandidate c;
    c.literal = parse_literal(text);
    c.insert_position = pos;
    return c;
  };
  CHECK(classify(p, "q.1", make("b(X)", 2), {0, 1, 2}, 1) == Occam::Subsumed);
  CHECK(classify(p, "q.1", make("w(X)", 2), {0, 1, 2}, 1) == Occam::Underivable);
  CHECK(classify(p, "q.1", make("1 < 0", 2), {0, 1, 2}, 1) == Occam::Contradictory);
  CHECK(classify(p, "q.1", make("X =< 1", 2), {0, 1, 2}, 1) == Occam::Deducible);
  CHECK(classify(p, "q.1", make("X < 1", 2), {0, 1, 2}, 1) == Occam::Contradictory);
  Program r = parse_program("q(X) :- a(X). a(0). a(1).");
  CHECK(classify(r, "q.1", make("X < 1", 1), {0, 1, 2}, 1) == Occam::Restricting);
  CHECK(to_string(Occam::Restricting) == "restricting");
}
