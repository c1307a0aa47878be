#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linkclimate/noaa/cdo.hpp"

namespace linkclimate::noaa {

struct HttpGet {
  std::string path;  // endpoint path relative to the API base, e.g. "data"
  QueryParams params;
  std::map<std::string, std::string> headers;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// The request timed out; retryable.
class TransportTimeout : public Error {
 public:
  using Error::Error;
};

/// Where CDO responses come from: the live API or recorded fixtures.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const HttpGet& request) = 0;
  // Live transports need an API token.
  virtual bool requires_token() const { return false; }
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// One recorded response. An entry matches a request when the endpoint is
/// equal and every parameter the entry lists has the same value in the
/// request; unlisted request parameters are ignored.
struct FixtureEntry {
  std::string endpoint;
  std::map<std::string, std::string> params;
  std::string file;
  int status = 200;
  std::optional<std::size_t> records;  // expected record count, for validation
  std::string format = "json";         // "json" or "csv"
};

/// Replays responses recorded in a fixture directory:
///
///   <dir>/manifest.json   {"entries": [{"endpoint": "stations",
///                                       "params": {"locationid": "FIPS:EI", "offset": "1"},
///                                       "file": "stations_ie_page1.json",
///                                       "records": 2}, ...]}
///   <dir>/<file>          verbatim response body
///
/// Unmatched requests get a 404.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
    auto doc = nlohmann::json::parse(read_file(dir_ / "manifest.json"), nullptr, false);
    if (doc.is_discarded() || !doc.contains("entries") || !doc["entries"].is_array())
      throw Error("malformed fixture manifest in " + dir_.string());
    for (const auto& e : doc["entries"]) {
      if (!e.is_object() || !e.contains("endpoint") || !e.contains("file") || !e["endpoint"].is_string() ||
          !e["file"].is_string())
        throw Error("fixture manifest entry needs string 'endpoint' and 'file' in " + dir_.string());
      FixtureEntry entry;
      entry.endpoint = e["endpoint"].get<std::string>();
      entry.file = e["file"].get<std::string>();
      if (auto p = e.find("params"); p != e.end() && p->is_object())
        for (auto& [k, v] : p->items()) entry.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
      if (auto s = e.find("status"); s != e.end() && s->is_number_integer()) entry.status = s->get<int>();
      if (auto r = e.find("records"); r != e.end() && r->is_number_unsigned()) entry.records = r->get<std::size_t>();
      if (auto f = e.find("format"); f != e.end() && f->is_string()) entry.format = f->get<std::string>();
      entries_.push_back(std::move(entry));
    }
  }

  HttpResponse get(const HttpGet& request) override {
    ++requests_;
    for (const auto& entry : entries_) {
      if (entry.endpoint != request.path) continue;
      bool match = true;
      for (const auto& [k, v] : entry.params) {
        bool found = false;
        for (const auto& [rk, rv] : request.params)
          if (rk == k && rv == v) found = true;
        if (!found) {
          match = false;
          break;
        }
      }
      if (match) return {entry.status, read_file(dir_ / entry.file)};
    }
    return {404, R"({"message":"no recorded fixture for this request"})"};
  }

  const std::vector<FixtureEntry>& entries() const noexcept { return entries_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::size_t requests() const noexcept { return requests_; }

 private:
  std::filesystem::path dir_;
  std::vector<FixtureEntry> entries_;
  std::size_t requests_ = 0;
};

}  // namespace linkclimate::noaa
