#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>

#include "linkclimate/ingest/pipeline.hpp"
#include "linkclimate/noaa/cdo.hpp"
#include "linkclimate/portal/portal.hpp"

namespace linkclimate {

// Bad or missing configuration; field() names the key.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct PortalConfig {
  ingest::IngestConfig ingest;
  portal::PortalOptions portal;
  std::string listen_host = "0.0.0.0";
  int port = 8080;
  std::string api_base = noaa::default_api_base;
  std::chrono::seconds http_timeout{30};
  std::filesystem::path ui_dir;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str()); v && *v) return std::string(v);
  return std::nullopt;
}

/// "250ms", "10s", "30m", "168h", "7d"; a bare number is seconds.
inline std::optional<std::chrono::milliseconds> parse_duration(std::string_view s) {
  s = text::trim(s);
  std::size_t digits = 0;
  while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
  if (digits == 0 || digits > 12) return std::nullopt;
  long long n = std::stoll(std::string(s.substr(0, digits)));
  auto unit = s.substr(digits);
  using namespace std::chrono;
  if (unit.empty() || unit == "s") return duration_cast<milliseconds>(seconds(n));
  if (unit == "ms") return milliseconds(n);
  if (unit == "m") return duration_cast<milliseconds>(minutes(n));
  if (unit == "h") return duration_cast<milliseconds>(hours(n));
  if (unit == "d") return duration_cast<milliseconds>(hours(24 * n));
  return std::nullopt;
}

namespace detail {

inline long long parse_int(const std::string& key, std::string_view value, long long lo, long long hi) {
  long long n = 0;
  auto v = text::trim(value);
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || p != v.data() + v.size() || n < lo || n > hi)
    throw ConfigError(key, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got '" +
                               std::string(v) + "'");
  return n;
}

}  // namespace detail

/// Parses "key = value" lines ('#' starts a comment). Relative paths are
/// resolved against base_dir. Environment overrides: NOAA_TOKEN, PORT,
/// BASE_IRI. Unknown keys are errors.
inline PortalConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {},
                                 const EnvLookup& env = process_env) {
  PortalConfig cfg;
  auto path_of = [&](std::string_view v) {
    std::filesystem::path p{std::string(v)};
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (auto raw : text::split(text, '\n')) {
    ++line_no;
    auto line = text::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    std::string key(text::trim(line.substr(0, eq)));
    std::string value(text::trim(line.substr(eq + 1)));
    if (!seen.insert(key).second) throw ConfigError(key, "set more than once");

    if (key == "base_iri") {
      cfg.ingest.base_iri = value;
    } else if (key == "listen") {
      auto colon = value.rfind(':');
      if (colon == std::string::npos) throw ConfigError(key, "expected host:port");
      cfg.listen_host = value.substr(0, colon);
      cfg.port = static_cast<int>(detail::parse_int(key, value.substr(colon + 1), 0, 65535));
    } else if (key == "snapshot_path") {
      cfg.ingest.snapshot_path = path_of(value);
    } else if (key == "locations") {
      cfg.ingest.locations.clear();
      for (auto loc : text::split(value, ','))
        if (auto t = text::trim(loc); !t.empty()) cfg.ingest.locations.emplace_back(t);
    } else if (key == "dataset_id") {
      cfg.ingest.dataset_id = value;
    } else if (key == "window_days") {
      cfg.ingest.window_days = static_cast<int>(detail::parse_int(key, value, 1, 365));
    } else if (key == "interval") {
      auto d = parse_duration(value);
      if (!d) throw ConfigError(key, "expected a duration such as 7d or 168h");
      cfg.ingest.interval = std::chrono::duration_cast<std::chrono::seconds>(*d);
    } else if (key == "page_size") {
      cfg.ingest.page_size = static_cast<int>(detail::parse_int(key, value, 1, 1000));
    } else if (key == "api_base") {
      cfg.api_base = value;
    } else if (key == "query_timeout") {
      auto d = parse_duration(value);
      if (!d || d->count() <= 0) throw ConfigError(key, "expected a positive duration such as 10s");
      cfg.portal.query_timeout = *d;
    } else if (key == "http_timeout") {
      auto d = parse_duration(value);
      if (!d || d->count() < 1000) throw ConfigError(key, "expected a duration of at least 1s");
      cfg.http_timeout = std::chrono::duration_cast<std::chrono::seconds>(*d);
    } else if (key == "result_cap") {
      cfg.portal.max_solutions = static_cast<std::size_t>(detail::parse_int(key, value, 1, 100000000));
    } else if (key == "inbound_cap") {
      cfg.portal.inbound_cap = static_cast<std::size_t>(detail::parse_int(key, value, 0, 100000000));
    } else if (key == "ui_dir") {
      cfg.ui_dir = path_of(value);
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }

  if (auto token = env("NOAA_TOKEN")) cfg.ingest.token = *token;
  if (auto port = env("PORT")) cfg.port = static_cast<int>(detail::parse_int("PORT", *port, 0, 65535));
  if (auto base = env("BASE_IRI")) cfg.ingest.base_iri = *base;

  try {
    cfg.ingest.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.field(), std::string(e.what()).substr(e.field().size() + 2));
  }
  return cfg;
}

inline PortalConfig load_config(const std::filesystem::path& path, const EnvLookup& env = process_env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file " + path.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(body, path.parent_path(), env);
}

}  // namespace linkclimate
