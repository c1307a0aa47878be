#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linkclimate/ca/ontology.hpp"
#include "linkclimate/ingest/snapshot.hpp"
#include "linkclimate/noaa/client.hpp"
#include "linkclimate/rdf/store.hpp"

namespace linkclimate::ingest {

struct IngestConfig {
  std::string base_iri = "http://localhost:8080";
  // CDO ids for Ireland and the United Kingdom.
  std::vector<std::string> locations{"FIPS:EI", "FIPS:UK"};
  std::string dataset_id = "GHCND";
  int window_days = 30;
  std::chrono::seconds interval = std::chrono::hours(24 * 7);
  std::filesystem::path snapshot_path;  // empty: keep in memory only
  std::string token;
  int page_size = 1000;
  noaa::RetryPolicy retry;

  void validate() const {
    if (window_days < 1) throw ValidationError("window_days", "must be >= 1");
    if (window_days > 365) throw ValidationError("window_days", "must be <= 365 (CDO range limit)");
    if (interval < std::chrono::hours(1)) throw ValidationError("interval", "must be at least 1 hour");
    if (locations.empty()) throw ValidationError("locations", "at least one location id is required");
    if (page_size < 1 || page_size > 1000) throw ValidationError("page_size", "must be within 1..1000");
    ca::Vocabulary{base_iri};
  }
};

struct DateWindow {
  Date start;
  Date end;

  friend bool operator==(const DateWindow&, const DateWindow&) = default;
};

/// end = calendar (UTC) date of now; start = end - window_days.
inline DateWindow compute_window(std::chrono::system_clock::time_point now, int window_days) {
  if (window_days < 1) throw ValidationError("window_days", "must be >= 1");
  Date end = date_of(now);
  return {add_days(end, -window_days), end};
}

struct IngestReport {
  std::chrono::system_clock::time_point run_started{};
  std::optional<DateWindow> window;
  std::size_t stations_seen = 0;
  std::size_t observations_seen = 0;
  std::size_t triples_added = 0;         // includes schema_triples_added
  std::size_t triples_duplicate = 0;     // instance triples already present
  std::size_t schema_triples_added = 0;
  std::size_t values_replaced = 0;       // superseded values removed (NOAA corrections)
  std::size_t http_requests = 0;
  std::size_t retries = 0;
  std::size_t store_size = 0;
  std::vector<std::string> errors;
  double duration_seconds = 0;

  bool ok() const { return errors.empty(); }

  nlohmann::json to_json() const {
    nlohmann::json j{
        {"run_started", format_timestamp(run_started)},
        {"ok", ok()},
        {"stations_seen", stations_seen},
        {"observations_seen", observations_seen},
        {"triples_added", triples_added},
        {"triples_duplicate", triples_duplicate},
        {"schema_triples_added", schema_triples_added},
        {"values_replaced", values_replaced},
        {"http_requests", http_requests},
        {"retries", retries},
        {"store_size", store_size},
        {"errors", errors},
        {"duration_seconds", duration_seconds},
    };
    if (window) {
      j["window_start"] = format_date(window->start);
      j["window_end"] = format_date(window->end);
    } else {
      j["window_start"] = nullptr;
      j["window_end"] = nullptr;
    }
    return j;
  }

  // key=value pairs on one line, for logs and terminals.
  std::string to_text() const {
    std::string out = "run_started=" + format_timestamp(run_started);
    if (window) out += " window=" + format_date(window->start) + ".." + format_date(window->end);
    out += " stations_seen=" + std::to_string(stations_seen) + " observations_seen=" + std::to_string(observations_seen) +
           " triples_added=" + std::to_string(triples_added) + " triples_duplicate=" + std::to_string(triples_duplicate) +
           " schema_triples_added=" + std::to_string(schema_triples_added) +
           " values_replaced=" + std::to_string(values_replaced) + " http_requests=" + std::to_string(http_requests) +
           " retries=" + std::to_string(retries) + " store_size=" + std::to_string(store_size);
    char dur[32];
    std::snprintf(dur, sizeof dur, "%.3f", duration_seconds);
    out += " duration_seconds=";
    out += dur;
    out += ok() ? " status=ok" : " status=failed";
    for (const auto& e : errors) out += " error=\"" + e + "\"";
    return out;
  }
};

struct IngestOptions {
  std::chrono::system_clock::time_point now = std::chrono::system_clock::now();
  std::optional<DateWindow> window;  // overrides compute_window(now, window_days)
  noaa::Sleeper sleep = noaa::real_sleep;
  LogSink log;
};

namespace detail {

// Removes (s, p, o') for every o' other than t.object; returns the count.
inline std::size_t replace_functional(rdf::Graph& g, const rdf::Triple& t) {
  std::size_t removed = 0;
  for (const auto& old : g.match(t.subject, t.predicate, std::nullopt)) {
    if (old.object != t.object) removed += g.erase(old) ? 1 : 0;
  }
  return removed;
}

struct Tally {
  std::size_t added = 0;
  std::size_t duplicate = 0;
  std::size_t replaced = 0;
};

// Inserts mapped triples of one entity; rdf:type is the only
// multi-valued property, every other property keeps its latest value.
inline void apply_entity(rdf::Graph& g, const std::vector<rdf::Triple>& triples, Tally& tally) {
  for (const auto& t : triples) {
    if (t.predicate.as_iri().str() != rdf::iri::rdf_type) tally.replaced += replace_functional(g, t);
    if (g.insert(t)) ++tally.added;
    else ++tally.duplicate;
  }
}

}  // namespace detail

/// One fetch -> map -> merge pass over every configured location.
///
/// Works on a private copy of the current store graph. On success the copy
/// is written to the snapshot file and then published; on any error the
/// store and the snapshot file are left as they were and the error is
/// recorded in the report.
inline IngestReport run_ingest(const IngestConfig& config, rdf::Store& store, noaa::Transport& transport,
                               const IngestOptions& options = {}) {
  IngestReport report;
  report.run_started = options.now;
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&] {
    report.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (options.log)
      options.log(report.ok() ? LogLevel::info : LogLevel::error, "ingest " + report.to_text());
    return report;
  };

  auto write_lock = store.lock_for_write();
  std::optional<noaa::CdoClient> client;
  try {
    config.validate();
    const ca::Vocabulary vocab(config.base_iri);
    report.window = options.window ? *options.window : compute_window(options.now, config.window_days);

    rdf::Graph working = *store.snapshot();
    report.schema_triples_added = working.merge(ca::schema_triples(vocab));

    client.emplace(transport, config.token, config.retry, options.sleep);
    detail::Tally tally;
    for (const auto& location : config.locations) {
      noaa::CdoRequest request;
      request.dataset_id = config.dataset_id;
      request.location_id = location;
      request.start_date = report.window->start;
      request.end_date = report.window->end;
      request.limit = config.page_size;

      request.endpoint = noaa::Endpoint::stations;
      noaa::CdoPage stations = client->fetch_all(request);
      request.endpoint = noaa::Endpoint::data;
      noaa::CdoPage observations = client->fetch_all(request);

      report.stations_seen += stations.stations.size();
      report.observations_seen += observations.observations.size();
      for (const auto& s : stations.stations) detail::apply_entity(working, ca::map_station(s, vocab), tally);
      for (const auto& o : observations.observations)
        detail::apply_entity(working, ca::map_observation(o, vocab), tally);
    }
    report.triples_added = tally.added + report.schema_triples_added;
    report.triples_duplicate = tally.duplicate;
    report.values_replaced = tally.replaced;
    report.http_requests = client->stats().requests;
    report.retries = client->stats().retries;
    report.store_size = working.size();

    if (!config.snapshot_path.empty()) save_snapshot(working, config.snapshot_path);
    store.publish(std::move(working));
  } catch (const std::exception& e) {
    if (client) {
      report.http_requests = client->stats().requests;
      report.retries = client->stats().retries;
    }
    report.triples_added = 0;
    report.triples_duplicate = 0;
    report.schema_triples_added = 0;
    report.values_replaced = 0;
    report.store_size = store.snapshot()->size();
    report.errors.emplace_back(e.what());
  }
  return finish();
}

}  // namespace linkclimate::ingest
