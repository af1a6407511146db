#include <atomic>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "doctest.h"
#include "lpt/service.hpp"

using namespace lpt;
using nlohmann::json;

namespace {

struct Cli {
  int code = 0;
  std::string out;
  std::string err;
};

Cli cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lpt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Cli r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct Client {
  Api api{Corpus::builtin()};

  ApiResponse get(const std::string& path, const QueryParams& q = {}) { return api.handle("GET", path, q, ""); }
  ApiResponse post(const std::string& path, const json& body) { return api.handle("POST", path, {}, body.dump()); }
};

}  // namespace

TEST_CASE("cli: run") {
  auto r = cli({"run", "naive_sort", "-q", "sort([2,1,0],X)"});
  CHECK(r.code == 0);
  CHECK(r.out == "X = [0,1,2]\n");
  CHECK(cli({"run", "naive_sort", "-q", "sort([1,0],[0,0])"}).out == "false\n");
  CHECK(cli({"run", "naive_sort", "-q", "sort([1,0],[0,1])"}).out == "true\n");

  auto bad = cli({"run", "naive_sort", "-q", "sort(["});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("syntax error") != std::string::npos);
  CHECK(cli({"run", "nosuch", "-q", "p"}).code == 2);
  CHECK(cli({"run", "naive_sort"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);

  auto j = json::parse(cli({"run", "naive_sort", "-q", "sort([1,0],X)", "--format", "json"}).out);
  CHECK(j["answers"][0]["X"] == "[0,1]");
  CHECK(j["steps"].get<int>() > 0);
}

TEST_CASE("cli: replay") {
  auto r = cli({"replay", "tamaki_sato"});
  CHECK(r.code == 0);
  CHECK(r.out.find("matches expected: true") != std::string::npos);
  auto all = cli({"replay", "all", "--verify"});
  CHECK(all.code == 0);
  CHECK(all.out.find("some steps differ") == std::string::npos);
  CHECK(cli({"replay", "nosuch"}).code == 2);
  auto j = json::parse(cli({"replay", "selection", "--format", "json"}).out);
  CHECK(j["matches_expected"] == true);
}

TEST_CASE("cli: verify, bench, candidates, corpus") {
  CHECK(cli({"verify", "--lemma", "insert"}).code == 0);
  auto bad = cli({"verify", "--lemma", "corrupted_minlist"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("counterexample") != std::string::npos);
  CHECK(cli({"verify", "--compare", "naive_sort", "sort_ts", "--pred", "sort/2", "--pred-after", "sort_TS/2"}).code ==
        0);
  CHECK(cli({"verify"}).code == 2);

  auto b = cli({"bench", "naive_sort", "--sizes", "1-4"});
  CHECK(b.code == 0);
  CHECK(b.out.find("steps") != std::string::npos);
  CHECK(cli({"bench", "naive_sort", "--sizes", "6", "--max-steps", "10"}).code == 1);

  auto c = cli({"candidates", "tamaki_sato", "--steps", "3", "--clause", "sort.1.2"});
  CHECK(c.code == 0);
  CHECK(c.out.find("#0 ord1(Ls2)") != std::string::npos);

  CHECK(cli({"corpus", "list"}).out.find("tamaki_sato") != std::string::npos);
  CHECK(cli({"corpus", "show", "perm1"}).out.find("insert(A,Ls,[A|Ls]).") != std::string::npos);
  CHECK(cli({"corpus", "show", "nosuch"}).code == 2);
}

TEST_CASE("api: sessions, candidates, apply, undo") {
  Client c;
  auto created = c.post("/sessions", {{"base", "naive_sort"}});
  REQUIRE(created.status == 201);
  const std::string id = created.body["id"];
  CHECK(created.body["revision"] == 0);
  const std::string base = "/sessions/" + id;

  auto applied = c.post(base + "/apply", {{"revision", 0}, {"step", {{"rule", "unfold"}, {"clause", "sort.1"}, {"index", 0}}}});
  REQUIRE(applied.status == 200);
  CHECK(applied.body["revision"] == 1);
  CHECK(applied.body["history"][1]["safety"] == "semantics_preserving");

  auto cands = c.get(base + "/candidates", {{"clause", "sort.1.2"}});
  REQUIRE(cands.status == 200);
  CHECK(cands.body["candidates"][0]["literal"] == "ord1(Ls2)");
  CHECK(cands.body["candidates"][0]["scores"]["well_founded"] == true);
  CHECK(cands.body["candidates"][0]["scores"]["successful_path"] == true);

  auto stale = c.post(base + "/apply", {{"revision", 0}, {"step", {{"rule", "unfold"}, {"clause", "sort.1.2"}, {"index", 0}}}});
  CHECK(stale.status == 409);
  auto rule_error = c.post(base + "/apply", {{"revision", 1}, {"step", {{"rule", "unfold"}, {"clause", "nope"}, {"index", 0}}}});
  CHECK(rule_error.status == 422);
  CHECK(rule_error.body["error"]["code"] == "UnknownClause");
  auto state = c.get(base);
  CHECK(state.body["revision"] == 1);
  CHECK(state.body["program"] == applied.body["program"]);

  // Abductive folding as two steps with verification.
  auto intro = c.post(base + "/apply", {{"revision", 1},
                                        {"verify", true},
                                        {"step",
                                         {{"rule", "introduce_goal"},
                                          {"clause", "sort.1.2"},
                                          {"candidate", {{"rank", 0}, {"fingerprint", "ord1(Ls2)"}}}}}});
  REQUIRE(intro.status == 200);
  CHECK(intro.body["history"][2]["diff"]["verdict"] == "equal");
  auto matches = c.get(base + "/fold-matches", {{"clause", "sort.1.2"}});
  REQUIRE(matches.status == 200);
  CHECK(matches.body["matches"][0]["positions"] == json::array({0, 1}));
  auto folded = c.post(base + "/apply", {{"revision", 2},
                                         {"step",
                                          {{"rule", "fold"},
                                           {"clause", "sort.1.2"},
                                           {"positions", {0, 1}},
                                           {"folder", {{"source", "base"}, {"clause", "sort.1"}}}}}});
  REQUIRE(folded.status == 200);

  // The API state is the derivation snapshot, byte for byte.
  Script script = script_from_json(c.get(base + "/export").body);
  ReplayResult r = replay(script, Corpus::builtin());
  CHECK(to_string(r.final_program()) == folded.body["program"].get<std::string>());

  auto v = c.post(base + "/verify", json::object());
  CHECK(v.body["diff"]["verdict"] == "equal");
  auto lemma = c.post(base + "/verify", {{"lemma", "insert"}});
  CHECK(lemma.body["holds"] == true);

  auto undone = c.post(base + "/undo", {{"revision", 3}});
  REQUIRE(undone.status == 200);
  CHECK(undone.body["cursor"] == 2);
  CHECK(undone.body["can_redo"] == true);
  auto branch = c.post(base + "/apply", {{"revision", 4}, {"step", {{"rule", "unfold"}, {"clause", "sort.1.1"}, {"index", 0}}}});
  CHECK(branch.status == 409);
  CHECK(branch.body["error"]["code"] == "BranchConflict");
  auto truncated = c.post(base + "/apply", {{"revision", 4},
                                            {"truncate", true},
                                            {"step", {{"rule", "unfold"}, {"clause", "sort.1.1"}, {"index", 0}}}});
  CHECK(truncated.status == 200);
  CHECK(truncated.body["can_redo"] == false);
}

TEST_CASE("api: errors and corpus routes") {
  Client c;
  CHECK(c.get("/sessions/nope").status == 404);
  CHECK(c.get("/nowhere").status == 404);
  CHECK(c.post("/sessions", {{"base", "nosuch"}}).status == 404);
  CHECK(c.post("/sessions", json::object()).status == 400);
  CHECK(c.api.handle("POST", "/sessions", {}, "{not json").status == 400);
  auto inline_session = c.post("/sessions", {{"program", "p(X) :- q(X). q(0)."}});
  CHECK(inline_session.status == 201);
  CHECK(c.post("/sessions", {{"program", "p(X :-"}}).status == 400);
  const std::string id = inline_session.body["id"];
  CHECK(c.post("/sessions/" + id + "/apply", {{"step", {{"rule", "unfold"}}}}).status == 400);
  auto empty = c.get("/sessions/" + id + "/candidates", {{"clause", "p.1"}});
  CHECK(empty.body["candidates"].empty());
  CHECK(empty.body["explanation"] == "no folder partially matches");

  auto listing = c.get("/corpus");
  CHECK(listing.body["scripts"].size() == 5);
  CHECK(c.get("/corpus/programs/perm1").body["program"].get<std::string>().find("perm1([],[]).") == 0);
  CHECK(c.get("/corpus/lemmas/insert").body["kind"] == "implication");
  CHECK(c.get("/corpus/scripts/quicksort").body["expected_final"] == "qsort");
  CHECK(c.get("/corpus/programs/nosuch").status == 404);
  CHECK(c.api.handle("DELETE", "/sessions/" + id, {}, "").status == 200);
  CHECK(c.get("/sessions/" + id).status == 404);
}

TEST_CASE("http: requests over a socket") {
  Api api(Corpus::builtin());
  HttpServer server(api);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { server.run(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", R"({"base":"naive_sort"})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const std::string id = json::parse(created->body)["id"];
  auto got = client.Get("/sessions/" + id);
  REQUIRE(got);
  CHECK(json::parse(got->body)["revision"] == 0);
  auto stale = client.Post("/sessions/" + id + "/undo", R"({"revision":7})", "application/json");
  REQUIRE(stale);
  CHECK(stale->status == 409);

  server.stop();
  t.join();
}

TEST_CASE("api: concurrent sessions and stale writers") {
  Client c;
  const std::string id = c.post("/sessions", {{"base", "naive_sort"}}).body["id"];
  const std::string path = "/sessions/" + id + "/apply";
  json step = {{"revision", 0}, {"step", {{"rule", "unfold"}, {"clause", "sort.1"}, {"index", 0}}}};
  std::atomic<int> ok{0}, conflict{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      auto r = c.post(path, step);
      (r.status == 200 ? ok : conflict)++;
      c.post("/sessions", {{"base", "perm1"}});
      c.get("/sessions/" + id);
    });
  }
  for (auto& t : threads) t.join();
  CHECK(ok == 1);
  CHECK(conflict == 7);
  CHECK(c.get("/sessions").body["sessions"].size() == 9);
}
