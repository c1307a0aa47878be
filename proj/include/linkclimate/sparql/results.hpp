#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linkclimate/sparql/ast.hpp"

namespace linkclimate::sparql {

inline nlohmann::json term_to_json(const rdf::Term& term) {
  nlohmann::json j;
  switch (term.kind()) {
    case rdf::TermKind::iri:
      j["type"] = "uri";
      j["value"] = term.value();
      break;
    case rdf::TermKind::blank:
      j["type"] = "bnode";
      j["value"] = term.value();
      break;
    case rdf::TermKind::literal: {
      const auto& lit = term.as_literal();
      j["type"] = "literal";
      j["value"] = lit.lexical();
      if (lit.has_language()) j["xml:lang"] = lit.language();
      else if (!lit.is_plain_string()) j["datatype"] = lit.datatype().str();
      break;
    }
  }
  return j;
}

/// application/sparql-results+json document.
inline nlohmann::json results_to_json(const std::vector<Solution>& solutions, const std::vector<Variable>& projection) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : projection) vars.push_back(v.name);
  nlohmann::json bindings = nlohmann::json::array();
  for (const auto& s : solutions) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [name, term] : s.bindings) row[name] = term_to_json(term);
    bindings.push_back(std::move(row));
  }
  return {{"head", {{"vars", std::move(vars)}}}, {"results", {{"bindings", std::move(bindings)}}}};
}

inline std::string serialize_results_structured(const std::vector<Solution>& solutions,
                                                const std::vector<Variable>& projection) {
  return results_to_json(solutions, projection).dump();
}

namespace detail {

inline void append_csv_field(std::string& out, const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace detail

/// text/csv results: header of variable names, CRLF rows, IRIs bare,
/// literals by lexical form, blank nodes as "_:label".
inline std::string serialize_results_csv(const std::vector<Solution>& solutions,
                                         const std::vector<Variable>& projection) {
  std::string out;
  for (std::size_t i = 0; i < projection.size(); ++i) {
    if (i) out += ',';
    detail::append_csv_field(out, projection[i].name);
  }
  out += "\r\n";
  for (const auto& s : solutions) {
    for (std::size_t i = 0; i < projection.size(); ++i) {
      if (i) out += ',';
      auto it = s.bindings.find(projection[i].name);
      if (it == s.bindings.end()) continue;
      const rdf::Term& t = it->second;
      detail::append_csv_field(out, t.is_blank() ? "_:" + t.value() : t.value());
    }
    out += "\r\n";
  }
  return out;
}

}  // namespace linkclimate::sparql
