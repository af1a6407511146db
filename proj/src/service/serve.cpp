#include <httplib.h>

#include "lpt/service.hpp"

namespace lpt {

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>()) {
  auto dispatch = [&api](const httplib::Request& req, httplib::Response& res) {
    QueryParams query(req.params.begin(), req.params.end());
    ApiResponse r = api.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body.dump(), "application/json");
  };
  const std::string any = R"(/.*)";
  auto& s = impl_->server;
  s.Get(any, dispatch);
  s.Post(any, dispatch);
  s.Delete(any, dispatch);
  s.Options(any, [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace lpt
