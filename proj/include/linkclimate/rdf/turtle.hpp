#pragma once

#include <map>
#include <string>
#include <string_view>

#include "linkclimate/rdf/ntriples.hpp"

namespace linkclimate::rdf {

// label -> namespace IRI
using PrefixMap = std::map<std::string, std::string>;

namespace detail {

inline bool is_pn_local(std::string_view local) {
  if (local.empty()) return true;
  if (local.front() == '-') return false;
  for (unsigned char c : local)
    if (!std::isalnum(c) && c != '_' && c != '-') return false;
  return true;
}

}  // namespace detail

/// Shortest prefixed name for iri under prefixes, or "<iri>".
inline std::string turtle_iri(const std::string& iri, const PrefixMap& prefixes) {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : prefixes) {
    const std::string& ns = entry.second;
    if (ns.empty() || iri.size() < ns.size() || iri.compare(0, ns.size(), ns) != 0) continue;
    if (!detail::is_pn_local(std::string_view(iri).substr(ns.size()))) continue;
    if (!best || ns.size() > best->second.size()) best = &entry;
  }
  if (!best) return "<" + iri + ">";
  return best->first + ":" + iri.substr(best->second.size());
}

inline std::string turtle_term(const Term& term, const PrefixMap& prefixes) {
  if (term.is_iri()) return turtle_iri(term.as_iri().str(), prefixes);
  if (term.is_literal() && !term.as_literal().has_language() && !term.as_literal().is_plain_string()) {
    std::string out;
    detail::append_escaped_string(out, term.as_literal().lexical());
    return out + "^^" + turtle_iri(term.as_literal().datatype().str(), prefixes);
  }
  return to_ntriples(term);
}

/// Turtle with @prefix declarations first, then one block per subject.
/// Predicates are separated by ';', repeated-predicate objects by ','.
inline std::string serialize_turtle(const Graph& graph, const PrefixMap& prefixes) {
  std::string out;
  for (const auto& [label, ns] : prefixes) out += "@prefix " + label + ": <" + ns + "> .\n";
  if (graph.empty()) return out;
  if (!prefixes.empty()) out += '\n';

  const Term* subject = nullptr;
  const Term* predicate = nullptr;
  for (const auto& t : graph) {
    if (!subject || t.subject != *subject) {
      if (subject) out += " .\n\n";
      out += turtle_term(t.subject, prefixes);
      out += ' ';
      subject = &t.subject;
      predicate = nullptr;
    }
    if (predicate && t.predicate == *predicate) {
      out += ", ";
    } else {
      if (predicate) out += " ;\n    ";
      out += t.predicate.as_iri().str() == iri::rdf_type ? "a" : turtle_iri(t.predicate.as_iri().str(), prefixes);
      out += ' ';
      predicate = &t.predicate;
    }
    out += turtle_term(t.object, prefixes);
  }
  out += " .\n";
  return out;
}

}  // namespace linkclimate::rdf
