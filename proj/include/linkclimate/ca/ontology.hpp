#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "linkclimate/ca/records.hpp"
#include "linkclimate/rdf/graph.hpp"
#include "linkclimate/rdf/turtle.hpp"

namespace linkclimate::ca {

inline std::string strip_trailing_slashes(std::string base) {
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base;
}

/// Climate-analysis vocabulary rooted at "{base}/ontology/ca#".
class Vocabulary {
 public:
  explicit Vocabulary(std::string base)
      : base_(strip_trailing_slashes(std::move(base))), ns_(base_ + "/ontology/ca#") {
    if (!rdf::Iri::is_valid(ns_)) throw ValidationError("base_iri", "not an absolute IRI: '" + base_ + "'");
  }

  const std::string& base() const noexcept { return base_; }
  const std::string& ns() const noexcept { return ns_; }

  rdf::Term term(std::string_view local) const { return rdf::Term::iri(ns_ + std::string(local)); }

  rdf::Term station_class() const { return term("Station"); }
  rdf::Term observation_class() const { return term("Observation"); }
  rdf::Term has_station() const { return term("hasStation"); }
  rdf::Term datatype() const { return term("datatype"); }
  rdf::Term date() const { return term("date"); }
  rdf::Term value() const { return term("value"); }
  rdf::Term elevation() const { return term("elevation"); }

  /// Prefix labels used for Turtle output and predeclared in queries.
  rdf::PrefixMap prefixes() const {
    return {{"ca", ns_},
            {"rdf", std::string(rdf::ns::rdf)},
            {"rdfs", std::string(rdf::ns::rdfs)},
            {"xsd", std::string(rdf::ns::xsd)},
            {"geo", std::string(rdf::ns::wgs84)}};
  }

 private:
  std::string base_;
  std::string ns_;
};

inline void validate_station_id(std::string_view id) {
  if (id.empty()) throw ValidationError("id", "station id is empty");
  for (unsigned char c : id)
    if (std::isspace(c) || std::iscntrl(c)) throw ValidationError("id", "station id contains whitespace");
}

inline void validate_datatype_id(std::string_view id) {
  if (id.empty()) throw ValidationError("datatype", "datatype id is empty");
  for (unsigned char c : id)
    if (!(std::isupper(c) || std::isdigit(c)))
      throw ValidationError("datatype", "datatype id '" + std::string(id) + "' is not uppercase alphanumeric");
}

inline void validate(const StationRecord& r) {
  validate_station_id(r.id);
  if (!std::isfinite(r.latitude) || r.latitude < -90 || r.latitude > 90)
    throw ValidationError("latitude", "out of range [-90, 90]: " + text::format_decimal(r.latitude));
  if (!std::isfinite(r.longitude) || r.longitude < -180 || r.longitude > 180)
    throw ValidationError("longitude", "out of range [-180, 180]: " + text::format_decimal(r.longitude));
  if (r.elevation && !std::isfinite(*r.elevation)) throw ValidationError("elevation", "not a finite number");
}

inline void validate(const ObservationRecord& r) {
  validate_station_id(r.station_id);
  validate_datatype_id(r.datatype_id);
  if (!r.date.ok()) throw ValidationError("date", "not a valid calendar date");
  if (!std::isfinite(r.value)) throw ValidationError("value", "not a finite number");
}

// {base}/station/{percent-encoded id}
inline rdf::Iri station_uri(std::string_view base, std::string_view station_id) {
  validate_station_id(station_id);
  return rdf::Iri(strip_trailing_slashes(std::string(base)) + "/station/" + text::percent_encode(station_id));
}

// {base}/obs/{percent-encoded station id}/{YYYY-MM-DD}/{datatype}
inline rdf::Iri observation_uri(std::string_view base, std::string_view station_id, const Date& date,
                                std::string_view datatype_id) {
  validate_station_id(station_id);
  validate_datatype_id(datatype_id);
  if (!date.ok()) throw ValidationError("date", "not a valid calendar date");
  return rdf::Iri(strip_trailing_slashes(std::string(base)) + "/obs/" + text::percent_encode(station_id) + "/" +
                  format_date(date) + "/" + std::string(datatype_id));
}

/// 4 triples, or 5 when the elevation is known.
inline std::vector<rdf::Triple> map_station(const StationRecord& record, const Vocabulary& vocab) {
  validate(record);
  rdf::Term s(station_uri(vocab.base(), record.id));
  std::vector<rdf::Triple> out{
      {s, rdf::Term::iri(rdf::iri::rdf_type), vocab.station_class()},
      {s, rdf::Term::iri(rdf::iri::rdfs_label), rdf::Literal::string(record.name)},
      {s, rdf::Term::iri(rdf::iri::wgs84_lat), rdf::Literal::decimal(record.latitude)},
      {s, rdf::Term::iri(rdf::iri::wgs84_long), rdf::Literal::decimal(record.longitude)},
  };
  if (record.elevation) out.emplace_back(s, vocab.elevation(), rdf::Literal::decimal(*record.elevation));
  return out;
}

/// Always 5 triples; ca:hasStation points at station_uri(station_id).
inline std::vector<rdf::Triple> map_observation(const ObservationRecord& record, const Vocabulary& vocab) {
  validate(record);
  rdf::Term o(observation_uri(vocab.base(), record.station_id, record.date, record.datatype_id));
  return {
      {o, rdf::Term::iri(rdf::iri::rdf_type), vocab.observation_class()},
      {o, vocab.has_station(), rdf::Term(station_uri(vocab.base(), record.station_id))},
      {o, vocab.datatype(), rdf::Literal::string(record.datatype_id)},
      {o, vocab.date(), rdf::Literal::date(record.date)},
      {o, vocab.value(), rdf::Literal::decimal(record.value)},
  };
}

/// T-box: classes, properties, domains and ranges. Fixed size.
inline rdf::Graph schema_triples(const Vocabulary& vocab) {
  using rdf::Term;
  const Term type = Term::iri(rdf::iri::rdf_type);
  const Term label = Term::iri(rdf::iri::rdfs_label);
  const Term domain = Term::iri(rdf::iri::rdfs_domain);
  const Term range = Term::iri(rdf::iri::rdfs_range);
  const Term klass = Term::iri(rdf::iri::rdfs_class);
  const Term property = Term::iri(rdf::iri::rdf_property);

  rdf::Graph g;
  g.insert({vocab.station_class(), type, klass});
  g.insert({vocab.station_class(), label, rdf::Literal::string("Station")});
  g.insert({vocab.observation_class(), type, klass});
  g.insert({vocab.observation_class(), label, rdf::Literal::string("Observation")});

  auto declare = [&](const Term& p, const Term& d, const std::string& r) {
    g.insert({p, type, property});
    g.insert({p, domain, d});
    g.insert({p, range, Term::iri(r)});
  };
  declare(vocab.has_station(), vocab.observation_class(), vocab.ns() + "Station");
  declare(vocab.datatype(), vocab.observation_class(), rdf::iri::xsd_string);
  declare(vocab.date(), vocab.observation_class(), rdf::iri::xsd_date);
  declare(vocab.value(), vocab.observation_class(), rdf::iri::xsd_decimal);
  declare(vocab.elevation(), vocab.station_class(), rdf::iri::xsd_decimal);
  return g;
}

}  // namespace linkclimate::ca
