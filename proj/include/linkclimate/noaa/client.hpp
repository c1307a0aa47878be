#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <thread>
#include <tuple>

#include "linkclimate/noaa/transport.hpp"

namespace linkclimate::noaa {

struct RetryPolicy {
  int max_retries = 3;                            // after the first attempt
  std::chrono::milliseconds base_delay{1000};    // doubled per retry: 1s, 2s, 4s
  double jitter = 0.2;                            // +/- fraction of each delay
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline void real_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

struct FetchStats {
  std::size_t requests = 0;   // HTTP attempts, retries included
  std::size_t retries = 0;
  std::size_t pages = 0;
  std::size_t conflicts = 0;  // same record identity with a different value
};

/// CDO v2 client over an injected transport. Requests are issued one at a
/// time. Retries 429, 5xx and timeouts with exponential backoff.
class CdoClient {
 public:
  CdoClient(Transport& transport, std::string token, RetryPolicy policy = {}, Sleeper sleep = real_sleep,
            std::uint32_t seed = std::random_device{}())
      : transport_(transport), token_(std::move(token)), policy_(policy), sleep_(std::move(sleep)), rng_(seed) {}

  CdoPage fetch_page(const CdoRequest& request) {
    request.validate();
    const std::string descriptor = request.descriptor();
    if (transport_.requires_token() && token_.empty())
      throw CdoCredentialError(descriptor, "no NOAA API token configured");

    HttpGet get{to_string(request.endpoint), request.params(), {}};
    if (!token_.empty()) get.headers["token"] = token_;

    for (int attempt = 0;; ++attempt) {
      std::string failure;
      ++stats_.requests;
      try {
        HttpResponse response = transport_.get(get);
        if (response.status == 200) {
          ++stats_.pages;
          try {
            return parse_cdo_payload(response.body, request.endpoint);
          } catch (const CdoParseError& e) {
            throw CdoParseError(e.record_index(), e.field(), e.detail(), descriptor);
          }
        }
        if (response.status == 401 || response.status == 403)
          throw CdoCredentialError(descriptor, "NOAA refused the token (HTTP " + std::to_string(response.status) + ")");
        if (response.status != 429 && response.status < 500)
          throw CdoRequestError(descriptor, response.status, noaa_message(response.body));
        failure = "HTTP " + std::to_string(response.status);
      } catch (const TransportTimeout& e) {
        failure = std::string("timeout: ") + e.what();
      } catch (const CdoError&) {
        throw;
      } catch (const Error& e) {
        throw CdoTransportError(descriptor, e.what());
      }
      if (attempt >= policy_.max_retries)
        throw CdoTransportError(descriptor, "giving up after " + std::to_string(attempt + 1) + " attempts (" + failure + ")");
      ++stats_.retries;
      sleep_(backoff(attempt));
    }
  }

  /// Follows pagination from request.offset until offset > total_count.
  /// Records are keyed by identity (station id, or station/date/datatype);
  /// a later duplicate replaces the earlier one in place.
  CdoPage fetch_all(CdoRequest request) {
    CdoPage all;
    all.endpoint = request.endpoint;
    std::map<std::string, std::size_t> station_index;
    std::map<std::tuple<std::string, int, unsigned, unsigned, std::string>, std::size_t> obs_index;

    bool first = true;
    for (;;) {
      CdoPage page = fetch_page(request);
      if (first) {
        all.total_count = page.total_count;
        all.offset = static_cast<std::size_t>(request.offset);
        all.limit = static_cast<std::size_t>(request.limit);
        first = false;
      }
      for (auto& s : page.stations) {
        auto [it, fresh] = station_index.emplace(s.id, all.stations.size());
        if (fresh) {
          all.stations.push_back(std::move(s));
        } else {
          if (!(all.stations[it->second] == s)) ++stats_.conflicts;
          all.stations[it->second] = std::move(s);
        }
      }
      for (auto& o : page.observations) {
        auto key = std::make_tuple(o.station_id, static_cast<int>(o.date.year()), static_cast<unsigned>(o.date.month()),
                                   static_cast<unsigned>(o.date.day()), o.datatype_id);
        auto [it, fresh] = obs_index.emplace(std::move(key), all.observations.size());
        if (fresh) {
          all.observations.push_back(std::move(o));
        } else {
          if (!(all.observations[it->second] == o)) ++stats_.conflicts;
          all.observations[it->second] = std::move(o);
        }
      }
      // Step by what the server returned: it may cap the page below limit.
      std::size_t returned = page.size();
      if (returned == 0) break;
      request.offset += static_cast<int>(returned);
      if (static_cast<std::size_t>(request.offset) > all.total_count) break;
    }
    return all;
  }

  const FetchStats& stats() const noexcept { return stats_; }

 private:
  static std::string noaa_message(const std::string& body) {
    auto doc = nlohmann::json::parse(body, nullptr, false);
    if (!doc.is_discarded() && doc.is_object()) {
      for (const char* key : {"message", "developerMessage", "userMessage"})
        if (auto it = doc.find(key); it != doc.end() && it->is_string()) return it->get<std::string>();
    }
    return body.substr(0, 200);
  }

  std::chrono::milliseconds backoff(int attempt) {
    double base = static_cast<double>(policy_.base_delay.count()) * static_cast<double>(1u << std::min(attempt, 20));
    std::uniform_real_distribution<double> dist(1.0 - policy_.jitter, 1.0 + policy_.jitter);
    return std::chrono::milliseconds(static_cast<long long>(base * dist(rng_)));
  }

  Transport& transport_;
  std::string token_;
  RetryPolicy policy_;
  Sleeper sleep_;
  std::mt19937 rng_;
  FetchStats stats_;
};

}  // namespace linkclimate::noaa
