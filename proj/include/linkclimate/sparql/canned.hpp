#pragma once

#include <map>
#include <string>
#include <vector>

#include "linkclimate/ca/ontology.hpp"

namespace linkclimate::sparql {

// A named query template. "{{name}}" placeholders are filled from
// arguments, or from defaults when an argument is not given.
struct CannedQuery {
  std::string name;
  std::string description;
  std::map<std::string, std::string> defaults;  // every parameter; "" means required
  std::string text;
};

inline const std::vector<CannedQuery>& canned_queries() {
  static const std::vector<CannedQuery> queries{
      {"stations-list",
       "All stations with name and coordinates",
       {},
       "SELECT ?station ?name ?lat ?long WHERE {\n"
       "  ?station a ca:Station ;\n"
       "           rdfs:label ?name ;\n"
       "           geo:lat ?lat ;\n"
       "           geo:long ?long .\n"
       "} ORDER BY ?name\n"},
      {"observations-by-station",
       "Every observation recorded at one station (station=<NOAA id>)",
       {{"station", ""}},
       "SELECT ?obs ?date ?datatype ?value WHERE {\n"
       "  ?obs ca:hasStation <{{station}}> ;\n"
       "       ca:date ?date ;\n"
       "       ca:datatype ?datatype ;\n"
       "       ca:value ?value .\n"
       "} ORDER BY ?date\n"},
      {"values-in-date-range",
       "Values of one datatype between two dates (start=, end=, datatype=TMAX)",
       {{"start", ""}, {"end", ""}, {"datatype", "TMAX"}},
       "SELECT ?station ?date ?value WHERE {\n"
       "  ?obs ca:datatype \"{{datatype}}\" ;\n"
       "       ca:hasStation ?station ;\n"
       "       ca:date ?date ;\n"
       "       ca:value ?value .\n"
       "  FILTER(?date >= \"{{start}}\"^^xsd:date)\n"
       "  FILTER(?date <= \"{{end}}\"^^xsd:date)\n"
       "} ORDER BY ?date\n"},
      {"daily-value-for-datatype",
       "Per-station value of one datatype on one day (date=, datatype=TMAX)",
       {{"date", ""}, {"datatype", "TMAX"}},
       "SELECT ?station ?name ?value WHERE {\n"
       "  ?obs ca:datatype \"{{datatype}}\" ;\n"
       "       ca:date \"{{date}}\"^^xsd:date ;\n"
       "       ca:value ?value ;\n"
       "       ca:hasStation ?station .\n"
       "  ?station rdfs:label ?name .\n"
       "} ORDER BY DESC(?value)\n"},
  };
  return queries;
}

inline const CannedQuery* find_canned(std::string_view name) {
  for (const auto& q : canned_queries())
    if (q.name == name) return &q;
  return nullptr;
}

/// Fills the template. Arguments are validated per parameter (dates,
/// datatype codes, station ids minted to IRIs under vocab's base), so the
/// result never needs escaping.
inline std::string instantiate(const CannedQuery& query, const std::map<std::string, std::string>& args,
                               const ca::Vocabulary& vocab) {
  for (const auto& [name, value] : args)
    if (!query.defaults.count(name)) throw ValidationError(name, "unknown parameter for canned query " + query.name);

  std::string out = query.text;
  for (const auto& [name, fallback] : query.defaults) {
    auto it = args.find(name);
    std::string value = it != args.end() ? it->second : fallback;
    if (value.empty()) throw ValidationError(name, "required by canned query " + query.name);
    if (name == "station") {
      value = ca::station_uri(vocab.base(), value).str();
    } else if (name == "datatype") {
      ca::validate_datatype_id(value);
    } else if (!parse_date(value)) {
      throw ValidationError(name, "expected YYYY-MM-DD, got '" + value + "'");
    }
    const std::string placeholder = "{{" + name + "}}";
    for (auto pos = out.find(placeholder); pos != std::string::npos; pos = out.find(placeholder, pos + value.size()))
      out.replace(pos, placeholder.size(), value);
  }
  return out;
}

}  // namespace linkclimate::sparql
