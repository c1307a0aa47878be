#include <gtest/gtest.h>

#include <thread>

#include "linkclimate/portal/server.hpp"
#include "support/fixture_store.hpp"

using namespace linkclimate;
using namespace linkclimate::portal;
using testsupport::kBase;

namespace {

const std::string kStation1 = kBase + "/station/GHCND%3ATEST0001";
const std::string kObs1 = kBase + "/obs/GHCND%3ATEST0001/2021-06-01/TMAX";

class PortalTest : public ::testing::Test {
 protected:
  void SetUp() override { testsupport::load_standard(store); }

  Response get(const std::string& path, const std::string& accept = {},
               std::multimap<std::string, std::string> params = {}) const {
    Request r;
    r.path = path;
    r.params = std::move(params);
    if (!accept.empty()) r.headers["Accept"] = accept;
    return portal.handle(r);
  }

  Response post_sparql(const std::string& content_type, const std::string& body, const std::string& accept = {}) {
    Request r;
    r.method = "POST";
    r.path = "/sparql";
    r.headers["Content-Type"] = content_type;
    if (!accept.empty()) r.headers["Accept"] = accept;
    r.body = body;
    return portal.handle(r);
  }

  static std::string header(const Response& r, const std::string& name) {
    for (const auto& [k, v] : r.headers)
      if (text::iequals(k, name)) return v;
    return {};
  }

  rdf::Store store;
  Portal portal{store, ca::Vocabulary(kBase)};
};

}  // namespace

TEST(Negotiation, Table) {
  struct Case {
    const char* accept;
    std::optional<Format> expected;
  };
  const Case cases[] = {
      {"text/turtle", Format::turtle},
      {"text/html,application/xhtml+xml,*/*;q=0.8", Format::html},
      {"application/json;q=0.9, text/turtle;q=1.0", Format::turtle},
      {"application/json", Format::json},
      {"*/*", Format::turtle},
      {"", Format::turtle},
      {"application/n-triples", Format::ntriples},
      {"application/xhtml+xml", Format::html},
      {"text/*", Format::turtle},
      {"application/*;q=0.5, text/html;q=0.4", Format::json},
      {"image/png", std::nullopt},
      {"text/turtle;q=0", std::nullopt},
      {"text/turtle;q=0.5, application/json;q=0.5", Format::turtle},
      {"TEXT/HTML", Format::html},
      {"garbage, application/json", Format::json},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(negotiate(c.accept), c.expected) << c.accept;
    EXPECT_EQ(negotiate(c.accept), negotiate(c.accept));
  }
  EXPECT_EQ(negotiate_results(""), ResultFormat::json);
  EXPECT_EQ(negotiate_results("text/csv"), ResultFormat::csv);
  EXPECT_EQ(negotiate_results("application/sparql-results+json"), ResultFormat::json);
  EXPECT_EQ(negotiate_results("text/turtle"), std::nullopt);
}

TEST_F(PortalTest, SparqlGet) {
  auto r = get("/sparql", {}, {{"query", "SELECT ?s WHERE { ?s a ca:Station . }"}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.content_type, "application/sparql-results+json");
  auto j = nlohmann::json::parse(r.body);
  EXPECT_EQ(j["head"]["vars"], nlohmann::json({"s"}));
  EXPECT_EQ(j["results"]["bindings"].size(), 2u);
  EXPECT_EQ(header(r, "Access-Control-Allow-Origin"), "*");
}

TEST_F(PortalTest, SparqlPostForms) {
  const std::string q = "SELECT ?o ?v WHERE { ?o ca:value ?v } ORDER BY ?v";
  auto direct = post_sparql("application/sparql-query", q);
  auto form = post_sparql("application/x-www-form-urlencoded; charset=UTF-8", "query=" + text::percent_encode(q));
  ASSERT_EQ(direct.status, 200);
  ASSERT_EQ(form.status, 200);
  EXPECT_EQ(direct.body, form.body);
  EXPECT_EQ(nlohmann::json::parse(direct.body)["results"]["bindings"].size(), 10u);

  auto csv = post_sparql("application/sparql-query", "SELECT ?s ?n WHERE { ?s rdfs:label ?n } ORDER BY ?n LIMIT 1",
                         "text/csv");
  ASSERT_EQ(csv.status, 200);
  EXPECT_EQ(csv.content_type, "text/csv; charset=utf-8");
  EXPECT_EQ(csv.body, "s,n\r\n" + kBase + "/ontology/ca#Observation,Observation\r\n");
}

TEST_F(PortalTest, SparqlErrors) {
  auto bad = get("/sparql", {}, {{"query", "SELECT ?s WHERE {\n ?s a }"}});
  EXPECT_EQ(bad.status, 400);
  EXPECT_NE(bad.body.find("line 2, column 7"), std::string::npos) << bad.body;
  EXPECT_EQ(get("/sparql").status, 400);
  EXPECT_EQ(get("/sparql", "image/png", {{"query", "SELECT * WHERE { ?s ?p ?o }"}}).status, 406);
  EXPECT_EQ(post_sparql("text/plain", "SELECT * WHERE { ?s ?p ?o }").status, 415);
  Request del;
  del.method = "DELETE";
  del.path = "/sparql";
  EXPECT_EQ(portal.handle(del).status, 405);
  Request options;
  options.method = "OPTIONS";
  options.path = "/sparql";
  auto pre = portal.handle(options);
  EXPECT_EQ(pre.status, 204);
  EXPECT_FALSE(header(pre, "Access-Control-Allow-Methods").empty());
}

TEST_F(PortalTest, SparqlTruncationIsFlagged) {
  Portal capped(store, ca::Vocabulary(kBase), PortalOptions{200, 5, std::chrono::seconds(10)});
  Request r;
  r.path = "/sparql";
  r.params.emplace("query", "SELECT * WHERE { ?s ?p ?o }");
  auto res = capped.handle(r);
  ASSERT_EQ(res.status, 200);
  EXPECT_EQ(header(res, "X-Results-Truncated"), "true");
  auto j = nlohmann::json::parse(res.body);
  EXPECT_EQ(j["truncated"], true);
  EXPECT_EQ(j["results"]["bindings"].size(), 5u);
}

TEST_F(PortalTest, DereferenceStationAsTurtle) {
  for (const std::string path : {"/station/GHCND%3ATEST0001", "/station/GHCND:TEST0001"}) {
    auto r = get(path, "text/turtle");
    ASSERT_EQ(r.status, 200) << path;
    EXPECT_EQ(r.content_type, "text/turtle; charset=utf-8");
    EXPECT_NE(r.body.find("a ca:Station"), std::string::npos);
    EXPECT_EQ(header(r, "Vary"), "Accept");
  }
  auto nt = get("/station/GHCND%3ATEST0001", "application/n-triples");
  rdf::Graph g = rdf::parse_ntriples(nt.body);
  EXPECT_EQ(g.count(rdf::Term::iri(kStation1), std::nullopt, std::nullopt), 4u);
  EXPECT_EQ(g.count(std::nullopt, std::nullopt, rdf::Term::iri(kStation1)), 10u);
  EXPECT_EQ(g.size(), 14u);
}

TEST_F(PortalTest, DereferenceErrors) {
  EXPECT_EQ(get("/station/NOPE", "text/turtle").status, 404);
  auto json404 = get("/station/NOPE", "application/json");
  EXPECT_EQ(json404.status, 404);
  EXPECT_EQ(nlohmann::json::parse(json404.body)["error"], "not found");
  EXPECT_EQ(get("/station/NOPE", "text/html").status, 404);
  EXPECT_EQ(get("/station/%zz").status, 400);
  EXPECT_EQ(get("/station/").status, 400);
  EXPECT_EQ(get("/obs/GHCND%3ATEST0001/June/TMAX").status, 400);
  EXPECT_EQ(get("/obs/GHCND%3ATEST0001/2021-06-01/tmax").status, 400);
  EXPECT_EQ(get("/station/GHCND%3ATEST0001", "image/png").status, 406);
  EXPECT_EQ(get("/elsewhere").status, 404);
}

TEST_F(PortalTest, DereferenceObservationAsHtml) {
  auto r = get("/obs/GHCND%3ATEST0001/2021-06-01/TMAX", "text/html,application/xhtml+xml,*/*;q=0.8");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "text/html; charset=utf-8");
  EXPECT_NE(r.body.find("<a href=\"/station/GHCND%3ATEST0001\">"), std::string::npos) << r.body;
  EXPECT_NE(r.body.find("/ui/?focus="), std::string::npos);
}

TEST_F(PortalTest, DereferenceAsJson) {
  auto r = get("/obs/GHCND%3ATEST0001/2021-06-01/TMAX", "application/json");
  ASSERT_EQ(r.status, 200);
  auto j = nlohmann::json::parse(r.body);
  EXPECT_EQ(j["subject"], kObs1);
  EXPECT_EQ(j["outbound"].size(), 5u);
}

TEST_F(PortalTest, Describe) {
  auto r = get("/describe", {}, {{"uri", kStation1}});
  ASSERT_EQ(r.status, 200);
  auto j = nlohmann::json::parse(r.body);
  EXPECT_EQ(j["outbound"].size(), 4u);
  EXPECT_EQ(j["inbound"].size(), 10u);
  EXPECT_EQ(j["inbound_total"], 10);
  EXPECT_EQ(j["label"], "TEST STATION ONE, EI");
  for (const auto& e : j["outbound"])
    EXPECT_EQ(e["expandable"], e["object"]["type"] == "uri") << e.dump();
  for (const auto& e : j["inbound"]) EXPECT_TRUE(e["expandable"]);

  auto obs = nlohmann::json::parse(get("/describe", {}, {{"uri", kObs1}}).body);
  bool station_edge = false;
  for (const auto& e : obs["outbound"])
    if (e["predicate"] == kBase + "/ontology/ca#hasStation") station_edge = e["expandable"] == true;
  EXPECT_TRUE(station_edge);

  auto unknown = get("/describe", {}, {{"uri", "http://elsewhere.example/x"}});
  ASSERT_EQ(unknown.status, 200);
  auto u = nlohmann::json::parse(unknown.body);
  EXPECT_TRUE(u["outbound"].empty());
  EXPECT_TRUE(u["inbound"].empty());
  EXPECT_EQ(get("/describe", {}, {{"uri", "not an iri"}}).status, 400);
  EXPECT_EQ(get("/describe").status, 400);
}

TEST_F(PortalTest, InboundCap) {
  Portal capped(store, ca::Vocabulary(kBase), PortalOptions{3, 10000, std::chrono::seconds(10)});
  Request r;
  r.path = "/describe";
  r.params.emplace("uri", kStation1);
  auto j = nlohmann::json::parse(capped.handle(r).body);
  EXPECT_EQ(j["inbound"].size(), 3u);
  EXPECT_EQ(j["inbound_total"], 10);
  EXPECT_EQ(j["inbound_truncated"], true);
  r.path = "/station/GHCND%3ATEST0001";
  r.params.clear();
  EXPECT_NE(capped.handle(r).body.find("truncated: 3 of 10"), std::string::npos);
}

TEST_F(PortalTest, HealthAndStats) {
  auto h = get("/healthz");
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(h.body, "ok");
  auto s = nlohmann::json::parse(get("/stats").body);
  EXPECT_EQ(s["triples"], 58 + testsupport::kSchemaSize);
  EXPECT_EQ(s["stations"], 2);
  EXPECT_EQ(s["observations"], 10);
  EXPECT_TRUE(s["last_ingest"].is_null());

  ingest::IngestReport report;
  report.run_started = std::chrono::sys_days{std::chrono::year{2021} / 7 / 1};
  portal.record_ingest(report);
  s = nlohmann::json::parse(get("/stats").body);
  EXPECT_EQ(s["last_ingest"], "2021-07-01T00:00:00Z");
  EXPECT_EQ(s["ingest_runs"], 1);
}

TEST_F(PortalTest, OverRealHttp) {
  auto ui = std::filesystem::temp_directory_path() / ("lc-ui-" + std::to_string(::getpid()));
  std::filesystem::create_directories(ui);
  std::ofstream(ui / "index.html") << "<html>explorer</html>";

  HttpServer server(portal, ui);
  int port = server.bind_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto station = client.Get("/station/GHCND%3ATEST0001", {{"Accept", "text/turtle"}});
  ASSERT_TRUE(station);
  EXPECT_EQ(station->status, 200);
  EXPECT_EQ(station->get_header_value("Content-Type"), "text/turtle; charset=utf-8");

  auto sparql = client.Post("/sparql", "SELECT ?s WHERE { ?s a ca:Station }", "application/sparql-query");
  ASSERT_TRUE(sparql);
  EXPECT_EQ(sparql->status, 200);
  EXPECT_EQ(nlohmann::json::parse(sparql->body)["results"]["bindings"].size(), 2u);

  auto form = client.Post("/sparql", "query=SELECT+%3Fs+WHERE+%7B+%3Fs+a+ca%3AStation+%7D",
                          "application/x-www-form-urlencoded");
  ASSERT_TRUE(form);
  EXPECT_EQ(form->body, sparql->body);

  auto asset = client.Get("/ui/index.html");
  ASSERT_TRUE(asset);
  EXPECT_EQ(asset->status, 200);
  EXPECT_EQ(asset->body, "<html>explorer</html>");

  auto options = client.Options("/describe");
  ASSERT_TRUE(options);
  EXPECT_EQ(options->status, 204);
  EXPECT_EQ(options->get_header_value("Access-Control-Allow-Origin"), "*");

  server.stop();
  t.join();
  std::filesystem::remove_all(ui);
}

TEST_F(PortalTest, StatsAgreeWithQueries) {
  auto s = nlohmann::json::parse(get("/stats").body);
  auto rows = [&](const std::string& q) {
    auto r = get("/sparql", {}, {{"query", q}});
    return nlohmann::json::parse(r.body)["results"]["bindings"].size();
  };
  EXPECT_EQ(s["triples"], rows("SELECT * WHERE { ?s ?p ?o }"));
  EXPECT_EQ(s["stations"], rows("SELECT ?s WHERE { ?s a ca:Station }"));
  EXPECT_EQ(s["observations"], rows("SELECT ?s WHERE { ?s a ca:Observation }"));
}
