#include <gtest/gtest.h>

#include "linkclimate/ca/ontology.hpp"
#include "linkclimate/rdf/turtle.hpp"

using namespace linkclimate;

namespace {

ca::StationRecord station(std::optional<double> elevation = std::nullopt) {
  return {"GHCND:EI000003969", "DUBLIN PHOENIX PARK, EI", 53.3639, -6.3194, elevation};
}

ca::ObservationRecord observation() { return {"GHCND:EI000003969", "TMAX", *parse_date("2021-06-01"), 21.3}; }

}  // namespace

TEST(Ontology, MintsStableIris) {
  EXPECT_EQ(ca::station_uri("http://localhost:8080/", "GHCND:USW00094728").str(),
            "http://localhost:8080/station/GHCND%3AUSW00094728");
  EXPECT_EQ(ca::observation_uri("http://localhost:8080", "GHCND:USW00094728", *parse_date("2021-06-01"), "TMAX").str(),
            "http://localhost:8080/obs/GHCND%3AUSW00094728/2021-06-01/TMAX");
  EXPECT_EQ(ca::station_uri("http://h", "a/b?c").str(), "http://h/station/a%2Fb%3Fc");
  EXPECT_THROW(ca::station_uri("http://h", "a b"), ValidationError);
  EXPECT_THROW(ca::station_uri("http://h", ""), ValidationError);
  EXPECT_THROW(ca::observation_uri("http://h", "S", *parse_date("2021-06-01"), "tmax"), ValidationError);
}

TEST(Ontology, StationMapping) {
  ca::Vocabulary v("http://localhost:8080");
  auto triples = ca::map_station(station(), v);
  ASSERT_EQ(triples.size(), 4u);
  EXPECT_EQ(ca::map_station(station(12.5), v).size(), 5u);
  rdf::Graph g;
  for (const auto& t : triples) g.insert(t);
  EXPECT_EQ(rdf::serialize_turtle(g, v.prefixes()),
            "@prefix ca: <http://localhost:8080/ontology/ca#> .\n"
            "@prefix geo: <http://www.w3.org/2003/01/geo/wgs84_pos#> .\n"
            "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
            "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
            "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
            "\n"
            "<http://localhost:8080/station/GHCND%3AEI000003969> a ca:Station ;\n"
            "    rdfs:label \"DUBLIN PHOENIX PARK, EI\" ;\n"
            "    geo:lat \"53.3639\"^^xsd:decimal ;\n"
            "    geo:long \"-6.3194\"^^xsd:decimal .\n");
}

TEST(Ontology, ObservationMapping) {
  ca::Vocabulary v("http://localhost:8080");
  auto triples = ca::map_observation(observation(), v);
  ASSERT_EQ(triples.size(), 5u);
  rdf::Graph g;
  for (const auto& t : triples) g.insert(t);
  rdf::Term obs = rdf::Term::iri("http://localhost:8080/obs/GHCND%3AEI000003969/2021-06-01/TMAX");
  EXPECT_TRUE(g.contains({obs, v.has_station(), rdf::Term::iri("http://localhost:8080/station/GHCND%3AEI000003969")}));
  EXPECT_TRUE(g.contains({obs, v.value(), rdf::Literal::typed("21.3", rdf::Iri(rdf::iri::xsd_decimal))}));
  EXPECT_TRUE(g.contains({obs, v.date(), rdf::Literal::typed("2021-06-01", rdf::Iri(rdf::iri::xsd_date))}));
  EXPECT_TRUE(g.contains({obs, v.datatype(), rdf::Literal::string("TMAX")}));
}

TEST(Ontology, ValidationNamesTheField) {
  ca::Vocabulary v("http://localhost:8080");
  auto field_of = [&](auto record) {
    try {
      ca::validate(record);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string();
  };
  auto s = station();
  s.latitude = 91;
  EXPECT_EQ(field_of(s), "latitude");
  s = station();
  s.longitude = -180.5;
  EXPECT_EQ(field_of(s), "longitude");
  s = station();
  s.id = "";
  EXPECT_EQ(field_of(s), "id");
  auto o = observation();
  o.value = std::nan("");
  EXPECT_EQ(field_of(o), "value");
  o = observation();
  o.datatype_id = "T MAX";
  EXPECT_EQ(field_of(o), "datatype");
  EXPECT_THROW(ca::map_station(s, v), ValidationError);
}

TEST(Ontology, SchemaHasFixedSize) {
  ca::Vocabulary v("http://localhost:8080");
  // 2 classes x (type, label) + 5 properties x (type, domain, range)
  EXPECT_EQ(ca::schema_triples(v).size(), 2u * 2 + 5u * 3);
  EXPECT_EQ(ca::schema_triples(v), ca::schema_triples(ca::Vocabulary("http://localhost:8080///")));
}

TEST(Ontology, MappingIsDeterministicAndIdempotent) {
  ca::Vocabulary v("http://localhost:8080");
  rdf::Graph g;
  for (int i = 0; i < 2; ++i) {
    for (const auto& t : ca::map_station(station(3), v)) g.insert(t);
    for (const auto& t : ca::map_observation(observation(), v)) g.insert(t);
  }
  EXPECT_EQ(g.size(), 10u);
}
