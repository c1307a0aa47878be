#pragma once

// Live CDO transport. Needs cpp-httplib; https bases additionally need
// CPPHTTPLIB_OPENSSL_SUPPORT defined before this header.

#include <chrono>
#include <string>

#include <httplib.h>

#include "linkclimate/noaa/transport.hpp"

namespace linkclimate::noaa {

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string api_base = default_api_base,
                         std::chrono::seconds timeout = std::chrono::seconds(30))
      : timeout_(timeout) {
    auto scheme_end = api_base.find("://");
    if (scheme_end == std::string::npos) throw ValidationError("api_base", "missing scheme: '" + api_base + "'");
    auto path_start = api_base.find('/', scheme_end + 3);
    origin_ = api_base.substr(0, path_start);
    prefix_ = path_start == std::string::npos ? "" : api_base.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }

  bool requires_token() const override { return true; }

  HttpResponse get(const HttpGet& request) override {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);

    std::string path = prefix_ + "/" + request.path;
    char sep = '?';
    for (const auto& [k, v] : request.params) {
      path += sep;
      path += k + "=" + text::percent_encode(v);
      sep = '&';
    }
    httplib::Headers headers(request.headers.begin(), request.headers.end());
    auto result = client.Get(path, headers);
    if (!result) {
      auto err = result.error();
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
        throw TransportTimeout(httplib::to_string(err));
      throw Error("HTTP transport error: " + httplib::to_string(err));
    }
    return {result->status, result->body};
  }

 private:
  std::string origin_;
  std::string prefix_;
  std::chrono::seconds timeout_;
};

}  // namespace linkclimate::noaa
