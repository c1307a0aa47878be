#include <gtest/gtest.h>

#include <random>

#include "linkclimate/noaa/client.hpp"
#include "support/scripted.hpp"

using namespace linkclimate;
using namespace linkclimate::noaa;

namespace {

const std::filesystem::path kFixtures = LINKCLIMATE_FIXTURES;

CdoRequest request(Endpoint e = Endpoint::data) {
  CdoRequest r;
  r.endpoint = e;
  r.location_id = "FIPS:EI";
  r.start_date = *parse_date("2021-06-01");
  r.end_date = *parse_date("2021-06-30");
  return r;
}

const char* kOnePage = R"({"metadata":{"resultset":{"offset":1,"count":1,"limit":1000}},
  "results":[{"date":"2021-06-01T00:00:00","datatype":"TMAX","station":"GHCND:A","attributes":",,E,","value":21.3}]})";

struct SleepLog {
  std::vector<std::chrono::milliseconds> delays;
  Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) { delays.push_back(d); };
  }
};

}  // namespace

TEST(Payload, ParsesStationsAndObservations) {
  auto stations = parse_cdo_payload(read_file(kFixtures / "standard/stations_ei.json"), Endpoint::stations);
  ASSERT_EQ(stations.stations.size(), 2u);
  EXPECT_EQ(stations.stations[0].id, "GHCND:TEST0001");
  EXPECT_FALSE(stations.stations[0].elevation);
  EXPECT_EQ(stations.total_count, 2u);

  auto data = parse_cdo_payload(read_file(kFixtures / "standard/data_ei.json"), Endpoint::data);
  ASSERT_EQ(data.observations.size(), 10u);
  EXPECT_EQ(data.observations[0].datatype_id, "TMAX");
  EXPECT_EQ(format_date(data.observations[0].date), "2021-06-01");
  EXPECT_DOUBLE_EQ(data.observations[0].value, 21.3);
}

TEST(Payload, EmptyDocumentIsAnEmptyPage) {
  auto page = parse_cdo_payload("{}", Endpoint::data);
  EXPECT_EQ(page.size(), 0u);
  EXPECT_EQ(page.total_count, 0u);
}

TEST(Payload, ErrorsIdentifyRecordAndField) {
  struct Case {
    const char* body;
    long index;
    const char* field;
  };
  const Case cases[] = {
      {"not json", -1, "document"},
      {"[]", -1, "document"},
      {R"({"results": {}})", -1, "results"},
      {R"({"results": [{"station":"A","datatype":"TMAX","date":"2021-06-01","value":1}, {"station":"A"}]})", 1,
       "datatype"},
      {R"({"results": [{"station":"A","datatype":"TMAX","date":"June","value":1}]})", 0, "date"},
      {R"({"results": [{"station":"A","datatype":"TMAX","date":"2021-06-01","value":"hot"}]})", 0, "value"},
      {R"({"metadata":{"resultset":{"count":5}}})", -1, "results"},
  };
  for (const auto& c : cases) {
    try {
      parse_cdo_payload(c.body, Endpoint::data);
      ADD_FAILURE() << "accepted " << c.body;
    } catch (const CdoParseError& e) {
      EXPECT_EQ(e.record_index(), c.index) << c.body;
      EXPECT_EQ(e.field(), c.field) << c.body;
    }
  }
}

// Property: the parser is total; any input yields a page or a CdoParseError.
TEST(Payload, FuzzedInputOnlyRaisesParseErrors) {
  std::string seed = read_file(kFixtures / "standard/data_ei.json");
  std::string stations = read_file(kFixtures / "standard/stations_ei.json");
  std::mt19937 rng(17);
  const std::string alphabet = "{}[]\":,0123456789.-eE truefalsnul\\";
  for (int i = 0; i < 3000; ++i) {
    std::string body = (i % 2 ? seed : stations);
    int edits = 1 + rng() % 8;
    for (int k = 0; k < edits && !body.empty(); ++k) {
      std::size_t at = rng() % body.size();
      switch (rng() % 3) {
        case 0: body[at] = alphabet[rng() % alphabet.size()]; break;
        case 1: body.erase(at, 1 + rng() % 5); break;
        default: body.insert(at, 1, alphabet[rng() % alphabet.size()]);
      }
    }
    for (Endpoint e : {Endpoint::data, Endpoint::stations}) {
      try {
        parse_cdo_payload(body, e);
      } catch (const CdoParseError&) {
      } catch (const std::exception& ex) {
        FAIL() << "unexpected " << typeid(ex).name() << ": " << ex.what() << "\n" << body;
      }
    }
  }
}

TEST(Csv, WideShapeSkipsBlankCells) {
  auto rows = parse_cdo_csv(read_file(kFixtures / "csv_wide/data.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].station_id, "GHCND:TEST0001");
  EXPECT_EQ(rows[0].datatype_id, "TMAX");
  EXPECT_DOUBLE_EQ(rows[1].value, 11.4);
  for (const auto& r : rows) EXPECT_FALSE(r.datatype_id == "TMIN" && format_date(r.date) == "2021-06-02");
}

TEST(Csv, NarrowShapeAndErrors) {
  auto rows = parse_cdo_csv("station,datatype,date,value\nGHCND:X,PRCP,2021-06-01,0.5\nY,TMAX,2021-06-02,-1\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].station_id, "GHCND:Y");
  EXPECT_THROW(parse_cdo_csv(""), CdoParseError);
  EXPECT_THROW(parse_cdo_csv("STATION,DATE,TMAX\nX,2021-06-01,warm\n"), CdoParseError);
  EXPECT_THROW(parse_cdo_csv("STATION,DATE,TMAX\n,2021-06-01,1\n"), CdoParseError);
  EXPECT_THROW(parse_cdo_csv("STATION,DATE,TMAX\n\"X,2021-06-01,1\n"), CdoParseError);
}

TEST(Request, EnforcesCdoLimits) {
  auto r = request();
  EXPECT_NO_THROW(r.validate());
  r.end_date = add_days(r.start_date, 366);
  EXPECT_THROW(r.validate(), ValidationError);
  r = request();
  r.limit = 1001;
  EXPECT_THROW(r.validate(), ValidationError);
  r = request(Endpoint::stations);
  for (const auto& [k, v] : r.params()) EXPECT_NE(k, "units");
}

TEST(Fixtures, MatchOnEndpointAndParamSubset) {
  FixtureTransport t(kFixtures / "standard");
  EXPECT_EQ(t.entries().size(), 4u);
  auto ok = t.get({"stations", request(Endpoint::stations).params(), {}});
  EXPECT_EQ(ok.status, 200);
  auto uk = request(Endpoint::data);
  uk.location_id = "FIPS:UK";
  EXPECT_EQ(t.get({"data", uk.params(), {}}).body, "{}\n");
  auto page2 = request(Endpoint::stations);
  page2.offset = 1001;
  EXPECT_EQ(t.get({"stations", page2.params(), {}}).status, 404);
  EXPECT_THROW(FixtureTransport(kFixtures / "missing"), Error);
}

TEST(Client, RetriesServerErrorsWithBackoff) {
  testsupport::ScriptedTransport t;
  t.push(503, "busy");
  t.push(503, "busy");
  t.push(200, kOnePage);
  SleepLog sleeps;
  CdoClient client(t, "tok", {}, sleeps.sleeper(), 1);
  auto page = client.fetch_page(request());
  EXPECT_EQ(page.observations.size(), 1u);
  EXPECT_EQ(client.stats().requests, 3u);
  EXPECT_EQ(client.stats().retries, 2u);
  ASSERT_EQ(sleeps.delays.size(), 2u);
  EXPECT_GE(sleeps.delays[0].count(), 800);
  EXPECT_LE(sleeps.delays[0].count(), 1200);
  EXPECT_GE(sleeps.delays[1].count(), 1600);
  EXPECT_LE(sleeps.delays[1].count(), 2400);
  EXPECT_EQ(t.seen[0].headers.at("token"), "tok");
}

TEST(Client, GivesUpAfterThreeRetries) {
  testsupport::ScriptedTransport t;
  t.push(500, "");
  t.push(429, "");
  t.push_timeout();
  t.push(502, "");
  t.push(200, kOnePage);
  SleepLog sleeps;
  CdoClient client(t, "", {}, sleeps.sleeper(), 1);
  EXPECT_THROW(client.fetch_page(request()), CdoTransportError);
  EXPECT_EQ(t.seen.size(), 4u);
  ASSERT_EQ(sleeps.delays.size(), 3u);
  EXPECT_GE(sleeps.delays[2].count(), 3200);
  EXPECT_LE(sleeps.delays[2].count(), 4800);
}

TEST(Client, ClientErrorsAreNotRetried) {
  testsupport::ScriptedTransport t;
  t.push(400, R"({"status":"400","message":"The limit parameter must be 1000 or less."})");
  SleepLog sleeps;
  CdoClient client(t, "", {}, sleeps.sleeper());
  try {
    client.fetch_page(request());
    FAIL();
  } catch (const CdoRequestError& e) {
    EXPECT_EQ(e.status(), 400);
    EXPECT_NE(std::string(e.what()).find("limit parameter"), std::string::npos);
    EXPECT_NE(e.descriptor().find("locationid=FIPS%3AEI"), std::string::npos);
  }
  EXPECT_TRUE(sleeps.delays.empty());

  t.push(401, "");
  EXPECT_THROW(client.fetch_page(request()), CdoCredentialError);
  t.push(403, "");
  EXPECT_THROW(client.fetch_page(request()), CdoCredentialError);
  EXPECT_TRUE(sleeps.delays.empty());
}

TEST(Client, MissingTokenFailsBeforeAnyRequest) {
  testsupport::ScriptedTransport t(nullptr, true);
  CdoClient client(t, "", {}, [](auto) {});
  EXPECT_THROW(client.fetch_page(request()), CdoCredentialError);
  EXPECT_TRUE(t.seen.empty());
}

TEST(Client, ParseErrorsCarryTheRequest) {
  testsupport::ScriptedTransport t;
  t.push(200, R"({"results":[{"station":"A"}]})");
  CdoClient client(t, "", {}, [](auto) {});
  try {
    client.fetch_page(request());
    FAIL();
  } catch (const CdoParseError& e) {
    EXPECT_EQ(e.record_index(), 0);
    EXPECT_NE(e.descriptor().find("data?"), std::string::npos);
  }
}

TEST(Client, FollowsPagination) {
  FixtureTransport fixtures(kFixtures / "paged");
  testsupport::ScriptedTransport t(&fixtures);
  CdoClient client(t, "", {}, [](auto) {});
  auto r = request(Endpoint::stations);
  r.limit = 3;
  auto all = client.fetch_all(r);
  ASSERT_EQ(all.stations.size(), 7u);
  EXPECT_EQ(all.stations.back().id, "GHCND:TEST0107");
  ASSERT_EQ(t.seen.size(), 3u);
  EXPECT_EQ(testsupport::param(t.seen[1], "offset"), "4");
  EXPECT_EQ(testsupport::param(t.seen[2], "offset"), "7");
}

TEST(Client, PagesServerCappedBelowLimit) {
  FixtureTransport fixtures(kFixtures / "paged");
  testsupport::ScriptedTransport t(&fixtures);
  CdoClient client(t, "", {}, [](auto) {});
  auto r = request(Endpoint::stations);
  r.limit = 1000;  // the fixture server returns 3 per page regardless
  auto all = client.fetch_all(r);
  EXPECT_EQ(all.stations.size(), 7u);
  ASSERT_EQ(t.seen.size(), 3u);
  EXPECT_EQ(testsupport::param(t.seen[1], "offset"), "4");
  EXPECT_EQ(testsupport::param(t.seen[2], "offset"), "7");
}

TEST(Client, StopsOnEmptyPage) {
  testsupport::ScriptedTransport t;
  t.push(200, R"({"metadata":{"resultset":{"offset":1,"count":50,"limit":1}},
    "results":[{"id":"S1","name":"A","latitude":1,"longitude":2}]})");
  t.push(200, "{}");
  CdoClient client(t, "", {}, [](auto) {});
  auto r = request(Endpoint::stations);
  r.limit = 1;
  EXPECT_EQ(client.fetch_all(r).stations.size(), 1u);
  EXPECT_EQ(t.seen.size(), 2u);
}

TEST(Client, DuplicatesAcrossPagesKeepTheLastValue) {
  testsupport::ScriptedTransport t;
  t.push(200, R"({"metadata":{"resultset":{"offset":1,"count":2,"limit":1}},
    "results":[{"date":"2021-06-01T00:00:00","datatype":"TMAX","station":"A","value":20}]})");
  t.push(200, R"({"metadata":{"resultset":{"offset":2,"count":2,"limit":1}},
    "results":[{"date":"2021-06-01T00:00:00","datatype":"TMAX","station":"A","value":20.5}]})");
  CdoClient client(t, "", {}, [](auto) {});
  auto r = request();
  r.limit = 1;
  auto all = client.fetch_all(r);
  ASSERT_EQ(all.observations.size(), 1u);
  EXPECT_DOUBLE_EQ(all.observations[0].value, 20.5);
  EXPECT_EQ(client.stats().conflicts, 1u);
}
