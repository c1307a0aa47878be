#pragma once

#include <filesystem>
#include <string>

#include <httplib.h>

#include "linkclimate/portal/portal.hpp"

namespace linkclimate::portal {

/// Binds a Portal to a cpp-httplib server. Static assets for the explorer
/// UI are mounted at /ui/ when ui_dir exists.
class HttpServer {
 public:
  explicit HttpServer(const Portal& portal, const std::filesystem::path& ui_dir = {}) : portal_(portal) {
    // The library default adds SO_REUSEPORT, which lets a second instance
    // share a port that is already in use instead of failing to bind.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    if (!ui_dir.empty() && std::filesystem::is_directory(ui_dir)) server_.set_mount_point("/ui", ui_dir.string());
    auto handler = [this](const httplib::Request& req, httplib::Response& res) { dispatch(req, res); };
    server_.Get(".*", handler);
    server_.Post(".*", handler);
    server_.Options(".*", handler);
  }

  bool bind(const std::string& host, int port) { return server_.bind_to_port(host, port); }
  int bind_any_port(const std::string& host) { return server_.bind_to_any_port(host); }

  // Blocks until stop().
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }
  bool is_running() const { return server_.is_running(); }

 private:
  void dispatch(const httplib::Request& hreq, httplib::Response& hres) const {
    Request req;
    req.method = hreq.method;
    req.path = hreq.target.substr(0, hreq.target.find('?'));
    for (const auto& [k, v] : hreq.params) req.params.emplace(k, v);
    for (const auto& [k, v] : hreq.headers) req.headers.emplace(k, v);
    // cpp-httplib folds form bodies into params; keep the raw body too.
    req.body = hreq.body;
    Response res = portal_.handle(req);
    hres.status = res.status;
    for (const auto& [k, v] : res.headers) hres.set_header(k, v);
    hres.set_content(res.body, res.content_type);
  }

  const Portal& portal_;
  httplib::Server server_;
};

}  // namespace linkclimate::portal
