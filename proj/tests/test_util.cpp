#include <gtest/gtest.h>

#include <random>

#include "linkclimate/config.hpp"
#include "linkclimate/util/csv.hpp"
#include "linkclimate/util/date.hpp"
#include "linkclimate/util/text.hpp"

using namespace linkclimate;

TEST(Date, ParseIsStrict) {
  EXPECT_TRUE(parse_date("2021-06-01"));
  EXPECT_TRUE(parse_date("2020-02-29"));
  EXPECT_FALSE(parse_date("2021-02-29"));
  EXPECT_FALSE(parse_date("2021-6-01"));
  EXPECT_FALSE(parse_date("2021-06-01T00:00:00"));
  EXPECT_FALSE(parse_date(""));
  EXPECT_EQ(format_date(*parse_date("0999-12-31")), "0999-12-31");
}

TEST(Date, AddDaysCrossesMonthsAndYears) {
  EXPECT_EQ(format_date(add_days(*parse_date("2021-03-01"), -1)), "2021-02-28");
  EXPECT_EQ(format_date(add_days(*parse_date("2020-12-31"), 1)), "2021-01-01");
}

TEST(Text, PercentEncodingRoundTrips) {
  EXPECT_EQ(text::percent_encode("GHCND:USW00094728"), "GHCND%3AUSW00094728");
  EXPECT_EQ(text::percent_encode("a b/~"), "a%20b%2F~");
  EXPECT_EQ(text::percent_decode("a+b%2f", true), "a b/");
  EXPECT_EQ(text::percent_decode("a+b"), "a+b");
  EXPECT_FALSE(text::percent_decode("%4"));
  EXPECT_FALSE(text::percent_decode("%zz"));

  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (int n = rng() % 20; n > 0; --n) s += static_cast<char>(rng() % 256);
    EXPECT_EQ(text::percent_decode(text::percent_encode(s)), s);
  }
}

TEST(Text, NumbersFollowTheDecimalGrammar) {
  EXPECT_EQ(text::parse_number("21.30"), 21.3);
  EXPECT_EQ(text::parse_number("+.5"), 0.5);
  EXPECT_EQ(text::parse_number("-1e3"), -1000);
  for (const char* bad : {"", "+", ".", "1e", "0x10", "inf", "nan", "1.2.3", " 1"})
    EXPECT_FALSE(text::parse_number(bad)) << bad;
}

TEST(Text, FormatDecimalIsShortestFixed) {
  EXPECT_EQ(text::format_decimal(21.3), "21.3");
  EXPECT_EQ(text::format_decimal(0.0), "0");
  EXPECT_EQ(text::format_decimal(-0.0), "0");
  EXPECT_EQ(text::format_decimal(1e-7), "0.0000001");
  EXPECT_EQ(text::format_decimal(1500), "1500");

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    double v = dist(rng);
    std::string s = text::format_decimal(v);
    EXPECT_EQ(s.find_first_of("eE"), std::string::npos);
    EXPECT_EQ(text::parse_number(s), v);
  }
}

TEST(Csv, QuotedFieldsAndLineEnds) {
  auto rows = csv::parse("a,\"b,c\",\"d\"\"e\"\r\n1,,\"x\ny\"\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (csv::Row{"a", "b,c", "d\"e"}));
  EXPECT_EQ(rows[1], (csv::Row{"1", "", "x\ny"}));
  EXPECT_THROW(csv::parse("a,\"unterminated\n"), SyntaxError);
}

TEST(Config, ParsesKeysAndAppliesEnvironment) {
  std::map<std::string, std::string> env{{"PORT", "9090"}, {"NOAA_TOKEN", "secret"}};
  auto lookup = [&](const std::string& k) -> std::optional<std::string> {
    auto it = env.find(k);
    return it == env.end() ? std::nullopt : std::optional(it->second);
  };
  auto cfg = parse_config(
      "# comment\n"
      "base_iri = http://climate.example.org/\n"
      "listen = 127.0.0.1:8000\n"
      "snapshot_path = data/store.nt\n"
      "locations = FIPS:EI , FIPS:UK\n"
      "window_days = 14\n"
      "interval = 168h\n"
      "query_timeout = 250ms\n"
      "result_cap = 50\n",
      "/etc/lc", lookup);
  EXPECT_EQ(cfg.ingest.base_iri, "http://climate.example.org/");
  EXPECT_EQ(cfg.listen_host, "127.0.0.1");
  EXPECT_EQ(cfg.port, 9090);
  EXPECT_EQ(cfg.ingest.snapshot_path, std::filesystem::path("/etc/lc/data/store.nt"));
  EXPECT_EQ(cfg.ingest.locations, (std::vector<std::string>{"FIPS:EI", "FIPS:UK"}));
  EXPECT_EQ(cfg.ingest.window_days, 14);
  EXPECT_EQ(cfg.ingest.interval, std::chrono::hours(168));
  EXPECT_EQ(cfg.portal.query_timeout, std::chrono::milliseconds(250));
  EXPECT_EQ(cfg.portal.max_solutions, 50u);
  EXPECT_EQ(cfg.ingest.token, "secret");

  env["BASE_IRI"] = "http://override.example/";
  EXPECT_EQ(parse_config("", {}, lookup).ingest.base_iri, "http://override.example/");
}

TEST(Config, ErrorsNameTheKey) {
  auto none = [](const std::string&) -> std::optional<std::string> { return std::nullopt; };
  auto key_of = [&](const std::string& text) {
    try {
      parse_config(text, {}, none);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(key_of("window_days = 0"), "window_days");
  EXPECT_EQ(key_of("listen = localhost"), "listen");
  EXPECT_EQ(key_of("interval = soon"), "interval");
  EXPECT_EQ(key_of("colour = blue"), "colour");
  EXPECT_EQ(key_of("base_iri = not an iri"), "base_iri");
  EXPECT_EQ(key_of("page_size = 5000"), "page_size");
  EXPECT_THROW(load_config("/nonexistent/portal.conf", none), ConfigError);
}
