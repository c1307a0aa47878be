#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linkclimate/ca/ontology.hpp"
#include "linkclimate/ingest/pipeline.hpp"
#include "linkclimate/portal/description.hpp"
#include "linkclimate/portal/negotiation.hpp"
#include "linkclimate/rdf/store.hpp"
#include "linkclimate/sparql/evaluator.hpp"
#include "linkclimate/sparql/parser.hpp"
#include "linkclimate/sparql/results.hpp"

namespace linkclimate::portal {

struct CaseInsensitiveLess {
  bool operator()(const std::string& a, const std::string& b) const { return text::to_lower(a) < text::to_lower(b); }
};

// Transport-neutral HTTP request as seen by the handlers.
struct Request {
  std::string method = "GET";
  std::string path;  // raw (still percent-encoded), without the query string
  std::multimap<std::string, std::string> params;  // decoded query parameters
  std::map<std::string, std::string, CaseInsensitiveLess> headers;
  std::string body;

  std::string header(const std::string& name) const {
    auto it = headers.find(name);
    return it == headers.end() ? std::string() : it->second;
  }
  std::optional<std::string> param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) return std::nullopt;
    return it->second;
  }
};

struct Response {
  int status = 200;
  std::string content_type = "text/plain; charset=utf-8";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

/// Parses "a=1&b=x%20y" (form encoding). Undecodable pairs are skipped.
inline std::multimap<std::string, std::string> parse_form(std::string_view body) {
  std::multimap<std::string, std::string> out;
  for (auto pair : text::split(body, '&')) {
    if (pair.empty()) continue;
    auto eq = pair.find('=');
    auto key = text::percent_decode(pair.substr(0, eq), true);
    auto value = text::percent_decode(eq == std::string_view::npos ? std::string_view() : pair.substr(eq + 1), true);
    if (key && value) out.emplace(std::move(*key), std::move(*value));
  }
  return out;
}

struct PortalOptions {
  std::size_t inbound_cap = 200;
  std::size_t max_solutions = 10000;
  std::chrono::milliseconds query_timeout{10000};
};

/// Request handlers for the public portal. All handlers are read-only: each
/// takes one store snapshot and never mutates it.
class Portal {
 public:
  Portal(rdf::Store& store, ca::Vocabulary vocab, PortalOptions options = {})
      : store_(store), vocab_(std::move(vocab)), options_(options), prefixes_(vocab_.prefixes()) {}

  Response handle(const Request& req) const {
    const std::string& path = req.path;
    if (path == "/sparql") return handle_sparql(req);
    if (path == "/describe") return handle_describe(req);
    if (path == "/healthz") return handle_health();
    if (path == "/stats") return handle_stats();
    if (path.rfind("/station/", 0) == 0 || path.rfind("/obs/", 0) == 0) {
      if (req.method != "GET" && req.method != "HEAD") return method_not_allowed("GET, HEAD");
      return handle_dereference(path, req.header("Accept"));
    }
    return {404, "text/plain; charset=utf-8", "Not found\n", {}};
  }

  Response handle_sparql(const Request& req) const {
    if (req.method == "OPTIONS") return with_cors({204, "text/plain; charset=utf-8", "", {}});
    std::optional<std::string> query;
    if (req.method == "GET") {
      query = req.param("query");
    } else if (req.method == "POST") {
      std::string content_type = text::to_lower(req.header("Content-Type"));
      content_type = content_type.substr(0, content_type.find(';'));
      content_type = std::string(text::trim(content_type));
      if (content_type == "application/sparql-query") {
        query = req.body;
      } else if (content_type == "application/x-www-form-urlencoded") {
        auto form = parse_form(req.body);
        if (auto it = form.find("query"); it != form.end()) query = it->second;
      } else {
        return with_cors({415, "text/plain; charset=utf-8",
                          "Unsupported Content-Type; use application/sparql-query or "
                          "application/x-www-form-urlencoded\n",
                          {}});
      }
    } else {
      return with_cors(method_not_allowed("GET, POST, OPTIONS"));
    }
    if (!query) return with_cors({400, "text/plain; charset=utf-8", "Missing 'query' parameter\n", {}});

    auto format = negotiate_results(req.header("Accept"));
    if (!format)
      return with_cors({406, "text/plain; charset=utf-8",
                        "Not acceptable. Supported: application/sparql-results+json, application/json, text/csv\n",
                        {}});

    sparql::QueryAst ast;
    try {
      ast = sparql::parse_query(*query, prefixes_);
    } catch (const SyntaxError& e) {
      return with_cors({400, "text/plain; charset=utf-8", std::string("Query error: ") + e.what() + "\n", {}});
    }

    sparql::EvaluationLimits limits;
    limits.max_solutions = options_.max_solutions;
    limits.deadline = std::chrono::steady_clock::now() + options_.query_timeout;
    auto snapshot = store_.snapshot();
    sparql::EvaluationResult result = sparql::evaluate(ast, *snapshot, limits);

    Response res;
    auto projection = ast.projected_variables();
    if (*format == ResultFormat::csv) {
      res.content_type = "text/csv; charset=utf-8";
      res.body = sparql::serialize_results_csv(result.solutions, projection);
    } else {
      res.content_type = "application/sparql-results+json";
      auto doc = sparql::results_to_json(result.solutions, projection);
      if (result.truncated) doc["truncated"] = true;
      res.body = doc.dump();
    }
    if (result.truncated) res.headers.emplace_back("X-Results-Truncated", "true");
    res.headers.emplace_back("Vary", "Accept");
    return with_cors(std::move(res));
  }

  /// Maps /station/{id} and /obs/{station}/{date}/{datatype} back to the
  /// minted IRI (segments may arrive percent-encoded or not).
  std::optional<rdf::Iri> entity_iri(std::string_view path) const {
    auto segments = text::split(path.substr(1), '/');
    std::vector<std::string> decoded;
    for (auto seg : segments) {
      auto d = text::percent_decode(seg);
      if (!d || d->empty()) return std::nullopt;
      decoded.push_back(std::move(*d));
    }
    try {
      if (decoded.size() == 2 && decoded[0] == "station") return ca::station_uri(vocab_.base(), decoded[1]);
      if (decoded.size() == 4 && decoded[0] == "obs") {
        auto date = parse_date(decoded[2]);
        if (!date) return std::nullopt;
        return ca::observation_uri(vocab_.base(), decoded[1], *date, decoded[3]);
      }
    } catch (const ValidationError&) {
    }
    return std::nullopt;
  }

  Response handle_dereference(std::string_view path, std::string_view accept) const {
    auto format = negotiate(accept);
    if (!format)
      return {406, "text/plain; charset=utf-8",
              "Not acceptable. Supported: text/turtle, application/json, text/html, application/n-triples\n",
              {{"Vary", "Accept"}}};
    auto iri = entity_iri(path);
    if (!iri) return {400, "text/plain; charset=utf-8", "Malformed entity path\n", {}};

    auto snapshot = store_.snapshot();
    EntityDescription d = describe(*snapshot, *iri, options_.inbound_cap);
    Response res = render(d, *format);
    if (d.empty()) {
      res.status = 404;
      if (*format == Format::turtle || *format == Format::ntriples) res.body = "# Not found: " + iri->str() + "\n";
      if (*format == Format::json) res.body = nlohmann::json{{"error", "not found"}, {"subject", iri->str()}}.dump();
    }
    res.headers.emplace_back("Vary", "Accept");
    return res;
  }

  Response handle_describe(const Request& req) const {
    if (req.method == "OPTIONS") return with_cors({204, "text/plain; charset=utf-8", "", {}});
    if (req.method != "GET") return with_cors(method_not_allowed("GET, OPTIONS"));
    auto uri = req.param("uri");
    if (!uri || !rdf::Iri::is_valid(*uri))
      return with_cors({400, "application/json", nlohmann::json{{"error", "'uri' must be an absolute IRI"}}.dump(), {}});
    auto snapshot = store_.snapshot();
    EntityDescription d = describe(*snapshot, rdf::Iri(*uri), options_.inbound_cap);
    return with_cors({200, "application/json", to_json(d, vocab_.base()).dump(), {}});
  }

  Response handle_health() const { return {200, "text/plain; charset=utf-8", "ok", {}}; }

  Response handle_stats() const { return {200, "application/json", stats().dump(), {}}; }

  nlohmann::json stats() const {
    auto snapshot = store_.snapshot();
    const rdf::Term type = rdf::Term::iri(rdf::iri::rdf_type);
    nlohmann::json j{
        {"triples", snapshot->size()},
        {"stations", snapshot->count(std::nullopt, type, vocab_.station_class())},
        {"observations", snapshot->count(std::nullopt, type, vocab_.observation_class())},
    };
    std::lock_guard lock(status_mutex_);
    j["ingest_runs"] = ingest_runs_;
    if (last_report_) {
      j["last_ingest"] = format_timestamp(last_report_->run_started);
      j["last_report"] = last_report_->to_json();
    } else {
      j["last_ingest"] = nullptr;
      j["last_report"] = nullptr;
    }
    return j;
  }

  void record_ingest(const ingest::IngestReport& report) {
    std::lock_guard lock(status_mutex_);
    last_report_ = report;
    ++ingest_runs_;
  }

  const ca::Vocabulary& vocabulary() const noexcept { return vocab_; }
  const rdf::PrefixMap& prefixes() const noexcept { return prefixes_; }

 private:
  static Response method_not_allowed(const std::string& allow) {
    return {405, "text/plain; charset=utf-8", "Method not allowed\n", {{"Allow", allow}}};
  }

  static Response with_cors(Response res) {
    res.headers.emplace_back("Access-Control-Allow-Origin", "*");
    res.headers.emplace_back("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.headers.emplace_back("Access-Control-Allow-Headers", "Content-Type, Accept");
    return res;
  }

  Response render(const EntityDescription& d, Format format) const {
    switch (format) {
      case Format::turtle: {
        std::string body = rdf::serialize_turtle(d.to_graph(), prefixes_);
        if (d.inbound_truncated())
          body += "# inbound references truncated: " + std::to_string(d.inbound.size()) + " of " +
                  std::to_string(d.inbound_total) + "\n";
        return {200, "text/turtle; charset=utf-8", std::move(body), {}};
      }
      case Format::ntriples:
        return {200, "application/n-triples", rdf::serialize_ntriples(d.to_graph()), {}};
      case Format::json:
        return {200, "application/json", to_json(d, vocab_.base()).dump(), {}};
      case Format::html:
        return {200, "text/html; charset=utf-8", render_html(d, vocab_.base(), prefixes_), {}};
    }
    return {500, "text/plain", "", {}};
  }

  rdf::Store& store_;
  ca::Vocabulary vocab_;
  PortalOptions options_;
  rdf::PrefixMap prefixes_;
  mutable std::mutex status_mutex_;
  std::optional<ingest::IngestReport> last_report_;
  std::size_t ingest_runs_ = 0;
};

}  // namespace linkclimate::portal
