#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "linkclimate/rdf/graph.hpp"
#include "linkclimate/rdf/turtle.hpp"
#include "linkclimate/sparql/results.hpp"

namespace linkclimate::portal {

/// The dereferenced view of one IRI: its outbound (predicate, object) and
/// inbound (subject, predicate) triples.
struct EntityDescription {
  rdf::Iri subject;
  std::optional<std::string> label;  // first rdfs:label value
  std::vector<std::pair<rdf::Term, rdf::Term>> outbound;
  std::vector<std::pair<rdf::Term, rdf::Term>> inbound;
  std::size_t inbound_total = 0;  // before truncation to the cap

  bool empty() const { return outbound.empty() && inbound.empty(); }
  bool inbound_truncated() const { return inbound.size() < inbound_total; }

  /// outbound ∪ inbound as triples.
  rdf::Graph to_graph() const {
    rdf::Graph g;
    rdf::Term s(subject);
    for (const auto& [p, o] : outbound) g.insert({s, p, o});
    for (const auto& [from, p] : inbound) g.insert({from, p, s});
    return g;
  }
};

inline EntityDescription describe(const rdf::Graph& graph, const rdf::Iri& subject, std::size_t inbound_cap) {
  EntityDescription d{subject, std::nullopt, {}, {}, 0};
  const rdf::Term s(subject);
  const rdf::Term label = rdf::Term::iri(rdf::iri::rdfs_label);
  graph.for_each_match(s, std::nullopt, std::nullopt, [&](const rdf::Triple& t) {
    d.outbound.emplace_back(t.predicate, t.object);
    if (!d.label && t.predicate == label && t.object.is_literal()) d.label = t.object.value();
  });
  graph.for_each_match(std::nullopt, std::nullopt, s, [&](const rdf::Triple& t) {
    if (d.inbound.size() < inbound_cap) d.inbound.emplace_back(t.subject, t.predicate);
    ++d.inbound_total;
  });
  return d;
}

// The portal can describe IRIs under its own base.
inline bool is_expandable(const rdf::Term& t, const std::string& base) {
  return t.is_iri() && t.value().size() > base.size() && t.value().compare(0, base.size(), base) == 0 &&
         t.value()[base.size()] == '/';
}

inline nlohmann::json to_json(const EntityDescription& d, const std::string& base) {
  nlohmann::json outbound = nlohmann::json::array();
  for (const auto& [p, o] : d.outbound)
    outbound.push_back({{"predicate", p.value()}, {"object", sparql::term_to_json(o)}, {"expandable", is_expandable(o, base)}});
  nlohmann::json inbound = nlohmann::json::array();
  for (const auto& [s, p] : d.inbound)
    inbound.push_back({{"subject", sparql::term_to_json(s)}, {"predicate", p.value()}, {"expandable", is_expandable(s, base)}});
  return {
      {"subject", d.subject.str()},
      {"label", d.label ? nlohmann::json(*d.label) : nlohmann::json(nullptr)},
      {"outbound", std::move(outbound)},
      {"inbound", std::move(inbound)},
      {"inbound_total", d.inbound_total},
      {"inbound_truncated", d.inbound_truncated()},
  };
}

inline std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

// Local dereference path for IRIs under base, the IRI itself otherwise.
inline std::string link_target(const std::string& iri, const std::string& base) {
  if (is_expandable(rdf::Term::iri(iri), base)) return iri.substr(base.size());
  return iri;
}

inline std::string html_term(const rdf::Term& t, const std::string& base, const rdf::PrefixMap& prefixes) {
  if (t.is_iri())
    return "<a href=\"" + html_escape(link_target(t.value(), base)) + "\">" +
           html_escape(rdf::turtle_iri(t.value(), prefixes)) + "</a>";
  if (t.is_blank()) return html_escape("_:" + t.value());
  const auto& lit = t.as_literal();
  std::string out = html_escape(lit.lexical());
  if (lit.has_language()) out += " <small>@" + html_escape(lit.language()) + "</small>";
  else if (!lit.is_plain_string())
    out += " <small>" + html_escape(rdf::turtle_iri(lit.datatype().str(), prefixes)) + "</small>";
  return out;
}

/// Minimal HTML profile page. Every IRI links to its own dereference URL.
inline std::string render_html(const EntityDescription& d, const std::string& base, const rdf::PrefixMap& prefixes) {
  const std::string title = d.label ? *d.label : d.subject.str();
  std::string out =
      "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" + html_escape(title) +
      "</title>\n</head>\n<body>\n<h1>" + html_escape(title) + "</h1>\n<p><code>" + html_escape(d.subject.str()) +
      "</code></p>\n<p><a href=\"/ui/?focus=" + text::percent_encode(d.subject.str()) +
      "\">View in graph explorer</a></p>\n";
  if (d.empty()) return out + "<p>No statements about this resource.</p>\n</body>\n</html>\n";

  out += "<h2>Properties</h2>\n<table>\n";
  for (const auto& [p, o] : d.outbound)
    out += "<tr><th>" + html_term(p, base, prefixes) + "</th><td>" + html_term(o, base, prefixes) + "</td></tr>\n";
  out += "</table>\n";
  if (!d.inbound.empty()) {
    out += "<h2>Referenced by</h2>\n<table>\n";
    for (const auto& [s, p] : d.inbound)
      out += "<tr><td>" + html_term(s, base, prefixes) + "</td><th>" + html_term(p, base, prefixes) + "</th></tr>\n";
    out += "</table>\n";
    if (d.inbound_truncated())
      out += "<p>Showing " + std::to_string(d.inbound.size()) + " of " + std::to_string(d.inbound_total) +
             " references.</p>\n";
  }
  return out + "</body>\n</html>\n";
}

}  // namespace linkclimate::portal
