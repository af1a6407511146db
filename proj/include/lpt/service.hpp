#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpt/corpus.hpp"
#include "lpt/derivation.hpp"

namespace lpt {

nlohmann::json to_json(const ExtensionDiff& d);
nlohmann::json to_json(const AbductiveCandidate& c, int rank);
nlohmann::json to_json(const StepProfile& p);
nlohmann::json to_json(const AnswerSet& a);
nlohmann::json to_json(const HistoryEntry& e, std::size_t index);
nlohmann::json session_state(const Session& s, const std::string& id);
/// One line per step: rule plus its parameters.
std::string describe(const Step& s);

std::vector<std::int64_t> parse_domain(const std::string& text);

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Session routes of the HTTP API, independent of the transport.
class Api {
 public:
  explicit Api(const Corpus& corpus, VerifyOptions verify = {});

  ApiResponse handle(const std::string& method, const std::string& path, const QueryParams& query,
                     const std::string& body);

 private:
  struct Slot {
    std::mutex mutex;
    Session session;
    explicit Slot(Session s) : session(std::move(s)) {}
  };

  std::shared_ptr<Slot> find(const std::string& id);
  ApiResponse create(const nlohmann::json& req);
  ApiResponse session_route(const std::string& method, const std::string& id, const std::string& action,
                            const QueryParams& query, const nlohmann::json& req);
  ApiResponse corpus_route(const std::vector<std::string>& parts);

  const Corpus& corpus_;
  VerifyOptions verify_;
  std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t next_id_ = 1;
};

/// HTTP transport for an Api.
class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool run();
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// The `lpt` command line. Exit codes: 0 success, 1 a step or check failed,
/// 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lpt
