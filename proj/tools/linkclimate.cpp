// linkclimate: operator entry point for the climate linked-data portal.
//
// Exit status: 0 success, 1 runtime failure, 2 usage or configuration error.
// Data goes to stdout, diagnostics to stderr.

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "linkclimate/config.hpp"
#include "linkclimate/ingest/pipeline.hpp"
#include "linkclimate/ingest/scheduler.hpp"
#include "linkclimate/ingest/snapshot.hpp"
#include "linkclimate/noaa/http_transport.hpp"
#include "linkclimate/portal/server.hpp"
#include "linkclimate/rdf/ntriples.hpp"
#include "linkclimate/rdf/turtle.hpp"
#include "linkclimate/sparql/canned.hpp"

namespace lc = linkclimate;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// Thrown for conditions that map to exit status 2.
struct UsageError : lc::Error {
  using lc::Error::Error;
};

void log_line(lc::LogLevel level, const std::string& message) {
  std::cerr << "[" << lc::format_timestamp(std::chrono::system_clock::now()) << "] " << lc::to_string(level) << ": "
            << message << "\n";
}

struct Globals {
  std::string config_path;
  std::string snapshot;
};

lc::PortalConfig load(const Globals& g) {
  lc::PortalConfig cfg = g.config_path.empty() ? lc::parse_config("") : lc::load_config(g.config_path);
  if (!g.snapshot.empty()) cfg.ingest.snapshot_path = g.snapshot;
  return cfg;
}

std::filesystem::path require_snapshot(const lc::PortalConfig& cfg) {
  if (cfg.ingest.snapshot_path.empty())
    throw lc::ConfigError("snapshot_path", "not configured; set it in the config file or pass --snapshot");
  return cfg.ingest.snapshot_path;
}

std::optional<lc::Date> date_option(const std::string& flag, const std::string& value) {
  if (value.empty()) return std::nullopt;
  auto d = lc::parse_date(value);
  if (!d) throw UsageError(flag + ": expected YYYY-MM-DD, got '" + value + "'");
  return d;
}

// Fixture replay or the live API. Live access needs NOAA_TOKEN.
std::unique_ptr<lc::noaa::Transport> make_transport(const lc::PortalConfig& cfg, const std::string& fixtures,
                                                    bool live) {
  if (!fixtures.empty()) return std::make_unique<lc::noaa::FixtureTransport>(fixtures);
  if (live) {
    if (cfg.ingest.token.empty()) throw UsageError("NOAA_TOKEN is not set; it is required for --live");
    return std::make_unique<lc::noaa::HttpTransport>(cfg.api_base, cfg.http_timeout);
  }
  return nullptr;
}

// ---- serve ----

struct ServeArgs {
  std::string fixtures;
  bool no_ingest = false;
};

int cmd_serve(const Globals& g, const ServeArgs& args) {
  lc::PortalConfig cfg = load(g);
  lc::rdf::Store store(lc::ingest::load_snapshot(cfg.ingest.snapshot_path, log_line));
  lc::portal::Portal portal(store, lc::ca::Vocabulary(cfg.ingest.base_iri), cfg.portal);

  std::unique_ptr<lc::noaa::Transport> transport;
  if (!args.no_ingest) {
    if (!args.fixtures.empty()) {
      transport = make_transport(cfg, args.fixtures, false);
    } else if (!cfg.ingest.token.empty()) {
      transport = make_transport(cfg, {}, true);
    } else {
      log_line(lc::LogLevel::warning, "NOAA_TOKEN is not set; scheduled ingestion disabled");
    }
  }

  // Block the termination signals before any thread starts; the main
  // thread collects them with sigwait.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  lc::portal::HttpServer server(portal, cfg.ui_dir);
  int port = cfg.port;
  if (port == 0) {
    port = server.bind_any_port(cfg.listen_host);
    if (port < 0) {
      log_line(lc::LogLevel::error, "cannot bind " + cfg.listen_host);
      return kFailure;
    }
  } else if (!server.bind(cfg.listen_host, port)) {
    log_line(lc::LogLevel::error, "cannot bind " + cfg.listen_host + ":" + std::to_string(port) + " (port in use?)");
    return kFailure;
  }
  log_line(lc::LogLevel::info, "listening on http://" + cfg.listen_host + ":" + std::to_string(port) + " with " +
                                   std::to_string(store.snapshot()->size()) + " triples");

  std::thread http([&] { server.listen_after_bind(); });

  lc::ingest::SystemClock clock;
  std::optional<std::jthread> loop;
  if (transport) {
    auto job = [&] {
      lc::ingest::IngestOptions options;
      options.log = log_line;
      auto report = lc::ingest::run_ingest(cfg.ingest, store, *transport, options);
      portal.record_ingest(report);
    };
    loop.emplace([&, job](std::stop_token stop) {
      lc::ingest::Scheduler scheduler(job, clock, cfg.ingest.interval, log_line);
      scheduler.run(stop);
    });
  }

  int sig = 0;
  sigwait(&signals, &sig);
  log_line(lc::LogLevel::info, std::string("received ") + (sig == SIGINT ? "SIGINT" : "SIGTERM") + ", shutting down");
  if (loop) {
    loop->request_stop();
    loop->join();
  }
  server.stop();
  http.join();
  return kOk;
}

// ---- ingest ----

struct IngestArgs {
  std::string fixtures;
  bool live = false;
  std::string start;
  std::string end;
  std::string format = "text";
};

int cmd_ingest(const Globals& g, const IngestArgs& args) {
  lc::PortalConfig cfg = load(g);
  auto start = date_option("--start", args.start);
  auto end = date_option("--end", args.end);
  if (start.has_value() != end.has_value()) throw UsageError("--start and --end must be given together");
  if (start && *end < *start) throw UsageError("--end is before --start");

  auto transport = make_transport(cfg, args.fixtures, args.live);
  lc::rdf::Store store(lc::ingest::load_snapshot(cfg.ingest.snapshot_path, log_line));

  lc::ingest::IngestOptions options;
  options.log = log_line;
  if (start) options.window = lc::ingest::DateWindow{*start, *end};
  auto report = lc::ingest::run_ingest(cfg.ingest, store, *transport, options);

  if (args.format == "json") std::cout << report.to_json().dump(2) << "\n";
  else std::cout << report.to_text() << "\n";
  return report.ok() ? kOk : kFailure;
}

// ---- query ----

struct QueryArgs {
  std::string text;
  std::string file;
  std::string canned;
  std::vector<std::string> params;
  std::string format = "table";
  bool list = false;
};

std::string canned_names() {
  std::string out;
  for (const auto& q : lc::sparql::canned_queries()) out += (out.empty() ? "" : ", ") + q.name;
  return out;
}

std::string table_cell(const std::optional<lc::rdf::Term>& t, const lc::rdf::PrefixMap& prefixes) {
  if (!t) return "";
  if (t->is_literal()) return t->value();
  return lc::rdf::turtle_term(*t, prefixes);
}

void print_table(const std::vector<lc::sparql::Solution>& rows, const std::vector<lc::sparql::Variable>& vars,
                 const lc::rdf::PrefixMap& prefixes) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  std::vector<std::string> header;
  for (const auto& v : vars) {
    header.push_back("?" + v.name);
    width.push_back(header.back().size());
  }
  for (const auto& s : rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      auto it = s.bindings.find(vars[i].name);
      line.push_back(table_cell(it == s.bindings.end() ? std::nullopt : std::optional(it->second), prefixes));
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      std::cout << (i ? " | " : "") << line[i];
      if (i + 1 < line.size()) std::cout << std::string(width[i] - line[i].size(), ' ');
    }
    std::cout << "\n";
  };
  emit(header);
  for (std::size_t i = 0; i < width.size(); ++i) std::cout << (i ? "-+-" : "") << std::string(width[i], '-');
  std::cout << "\n";
  for (const auto& line : cells) emit(line);
}

int cmd_query(const Globals& g, const QueryArgs& args) {
  if (args.list) {
    for (const auto& q : lc::sparql::canned_queries()) std::cout << q.name << "\t" << q.description << "\n";
    return kOk;
  }
  int sources = !args.text.empty() + !args.file.empty() + !args.canned.empty();
  if (sources != 1) throw UsageError("give exactly one of a query text, --file or --canned");
  if (!args.params.empty() && args.canned.empty()) throw UsageError("--param only applies to --canned");

  lc::PortalConfig cfg = load(g);
  lc::ca::Vocabulary vocab(cfg.ingest.base_iri);

  std::string query = args.text;
  if (!args.file.empty()) {
    try {
      query = lc::noaa::read_file(args.file);
    } catch (const lc::Error& e) {
      log_line(lc::LogLevel::error, e.what());
      return kFailure;
    }
  }
  if (!args.canned.empty()) {
    const auto* canned = lc::sparql::find_canned(args.canned);
    if (!canned) throw UsageError("unknown canned query '" + args.canned + "'; available: " + canned_names());
    std::map<std::string, std::string> values;
    for (const auto& p : args.params) {
      auto eq = p.find('=');
      if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + p + "'");
      values[p.substr(0, eq)] = p.substr(eq + 1);
    }
    try {
      query = lc::sparql::instantiate(*canned, values, vocab);
    } catch (const lc::ValidationError& e) {
      throw UsageError(e.what());
    }
  }

  lc::sparql::QueryAst ast;
  try {
    ast = lc::sparql::parse_query(query, vocab.prefixes());
  } catch (const lc::SyntaxError& e) {
    log_line(lc::LogLevel::error, std::string("query error: ") + e.what());
    return kFailure;
  }
  lc::rdf::Graph graph = lc::ingest::load_snapshot(require_snapshot(cfg), log_line);

  lc::sparql::EvaluationLimits limits;
  limits.max_solutions = cfg.portal.max_solutions;
  limits.deadline = std::chrono::steady_clock::now() + cfg.portal.query_timeout;
  auto result = lc::sparql::evaluate(ast, graph, limits);
  auto vars = ast.projected_variables();

  if (args.format == "csv") std::cout << lc::sparql::serialize_results_csv(result.solutions, vars);
  else if (args.format == "structured") std::cout << lc::sparql::serialize_results_structured(result.solutions, vars) << "\n";
  else print_table(result.solutions, vars, vocab.prefixes());

  std::cerr << result.solutions.size() << " row(s)" << (result.truncated ? " (truncated)" : "") << "\n";
  return kOk;
}

// ---- export ----

int cmd_export(const Globals& g, const std::string& out, const std::string& format) {
  lc::PortalConfig cfg = load(g);
  lc::rdf::Graph graph = lc::ingest::load_snapshot(require_snapshot(cfg), log_line);
  std::string body = format == "turtle" ? lc::rdf::serialize_turtle(graph, lc::ca::Vocabulary(cfg.ingest.base_iri).prefixes())
                                        : lc::rdf::serialize_ntriples(graph);
  if (out.empty() || out == "-") {
    std::cout << body;
  } else {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    file << body;
    file.close();
    if (!file) {
      log_line(lc::LogLevel::error, "cannot write " + out);
      return kFailure;
    }
  }
  log_line(lc::LogLevel::info, "exported " + std::to_string(graph.size()) + " triples");
  return kOk;
}

// ---- stats ----

int cmd_stats(const Globals& g) {
  lc::PortalConfig cfg = load(g);
  lc::rdf::Store store(lc::ingest::load_snapshot(require_snapshot(cfg), log_line));
  lc::portal::Portal portal(store, lc::ca::Vocabulary(cfg.ingest.base_iri), cfg.portal);
  auto stats = portal.stats();
  stats.erase("ingest_runs");
  stats.erase("last_ingest");
  stats.erase("last_report");
  std::cout << stats.dump(2) << "\n";
  return kOk;
}

// ---- validate ----

int cmd_validate(const std::string& dir) {
  std::unique_ptr<lc::noaa::FixtureTransport> fixtures;
  try {
    fixtures = std::make_unique<lc::noaa::FixtureTransport>(dir);
  } catch (const lc::Error& e) {
    log_line(lc::LogLevel::error, e.what());
    return kFailure;
  }
  std::vector<std::string> bad;
  for (const auto& entry : fixtures->entries()) {
    std::cout << entry.file << ": ";
    if (entry.status != 200) {
      std::cout << "status " << entry.status << ", not parsed\n";
      continue;
    }
    try {
      std::string body = lc::noaa::read_file(fixtures->dir() / entry.file);
      std::size_t count = 0;
      if (entry.format == "csv") {
        count = lc::noaa::parse_cdo_csv(body).size();
      } else {
        auto endpoint = entry.endpoint == "stations" ? lc::noaa::Endpoint::stations : lc::noaa::Endpoint::data;
        count = lc::noaa::parse_cdo_payload(body, endpoint).size();
      }
      std::cout << count << " record(s)";
      if (entry.records && *entry.records != count) {
        std::cout << ", manifest says " << *entry.records << "\n";
        bad.push_back(entry.file);
        continue;
      }
      std::cout << "\n";
    } catch (const std::exception& e) {
      std::cout << "INVALID: " << e.what() << "\n";
      bad.push_back(entry.file);
    }
  }
  if (bad.empty()) return kOk;
  std::string list;
  for (const auto& f : bad) list += (list.empty() ? "" : ", ") + f;
  log_line(lc::LogLevel::error, "invalid fixture file(s): " + list);
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Climate linked-data portal: serve, ingest, query, export, stats, validate"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("-c,--config", g.config_path, "key = value configuration file");
  app.add_option("--snapshot", g.snapshot, "Snapshot path (overrides snapshot_path)");

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Run the HTTP portal and the weekly ingest loop");
  serve->add_option("--fixtures", serve_args.fixtures, "Ingest from a fixture directory instead of the live API")
      ->check(CLI::ExistingDirectory);
  serve->add_flag("--no-ingest", serve_args.no_ingest, "Serve the snapshot without scheduled ingestion");

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Run one ingestion and print its report");
  auto* fixtures_opt = ingest->add_option("--fixtures", ingest_args.fixtures, "Replay a fixture directory")
                           ->check(CLI::ExistingDirectory);
  auto* live_opt = ingest->add_flag("--live", ingest_args.live, "Fetch from the NOAA CDO API (needs NOAA_TOKEN)");
  fixtures_opt->excludes(live_opt);
  ingest->add_option("--start", ingest_args.start, "Window start, YYYY-MM-DD");
  ingest->add_option("--end", ingest_args.end, "Window end, YYYY-MM-DD");
  ingest->add_option("--format", ingest_args.format, "Report format")->check(CLI::IsMember({"text", "json"}));

  QueryArgs query_args;
  auto* query = app.add_subcommand("query", "Evaluate a SPARQL SELECT query against the snapshot");
  query->add_option("query", query_args.text, "Query text");
  query->add_option("-f,--file", query_args.file, "Read the query from a file");
  query->add_option("--canned", query_args.canned, "Run a predesigned query by name");
  query->add_option("-p,--param", query_args.params, "Canned query parameter, key=value");
  query->add_flag("--list-canned", query_args.list, "List the predesigned queries");
  query->add_option("--format", query_args.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "structured"}));

  std::string export_out;
  std::string export_format = "ntriples";
  auto* exp = app.add_subcommand("export", "Write the snapshot graph");
  exp->add_option("-o,--out", export_out, "Output file ('-' for stdout)");
  exp->add_option("--format", export_format, "Serialization")->check(CLI::IsMember({"ntriples", "turtle"}));

  auto* stats = app.add_subcommand("stats", "Print snapshot statistics");

  std::string validate_dir;
  auto* validate = app.add_subcommand("validate", "Parse every file of a fixture directory");
  validate->add_option("--fixtures", validate_dir, "Fixture directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*serve) return cmd_serve(g, serve_args);
    if (*ingest) {
      if (ingest_args.fixtures.empty() && !ingest_args.live) throw UsageError("ingest needs --fixtures DIR or --live");
      return cmd_ingest(g, ingest_args);
    }
    if (*query) return cmd_query(g, query_args);
    if (*exp) return cmd_export(g, export_out, export_format);
    if (*stats) return cmd_stats(g);
    if (*validate) return cmd_validate(validate_dir);
  } catch (const lc::ConfigError& e) {
    log_line(lc::LogLevel::error, std::string("configuration: ") + e.what());
    return kUsage;
  } catch (const UsageError& e) {
    log_line(lc::LogLevel::error, e.what());
    return kUsage;
  } catch (const std::exception& e) {
    log_line(lc::LogLevel::error, e.what());
    return kFailure;
  }
  return kUsage;
}
