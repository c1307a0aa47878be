#pragma once

#include <optional>
#include <string>

#include "linkclimate/rdf/term.hpp"
#include "linkclimate/sparql/ast.hpp"

namespace linkclimate::sparql {

// Comparison class of a term. Terms of different classes never compare.
enum class ValueClass { numeric, date, string, lang_string, other_literal, iri, blank };

inline bool is_numeric_datatype(const std::string& dt) {
  return dt == rdf::iri::xsd_decimal || dt == rdf::iri::xsd_double || dt == rdf::iri::xsd_integer;
}

inline std::optional<double> numeric_value(const rdf::Term& t) {
  if (!t.is_literal() || !is_numeric_datatype(t.as_literal().datatype().str())) return std::nullopt;
  return text::parse_number(t.as_literal().lexical());
}

inline ValueClass value_class(const rdf::Term& t) {
  switch (t.kind()) {
    case rdf::TermKind::iri: return ValueClass::iri;
    case rdf::TermKind::blank: return ValueClass::blank;
    case rdf::TermKind::literal: break;
  }
  const rdf::Literal& lit = t.as_literal();
  const std::string& dt = lit.datatype().str();
  if (is_numeric_datatype(dt) && text::parse_number(lit.lexical())) return ValueClass::numeric;
  if (dt == rdf::iri::xsd_date && parse_date(lit.lexical())) return ValueClass::date;
  if (lit.is_plain_string()) return ValueClass::string;
  if (lit.has_language()) return ValueClass::lang_string;
  return ValueClass::other_literal;
}

namespace detail {

template <typename T>
bool apply(CompareOp op, const T& a, const T& b) {
  switch (op) {
    case CompareOp::eq: return a == b;
    case CompareOp::ne: return !(a == b);
    case CompareOp::lt: return a < b;
    case CompareOp::le: return a < b || a == b;
    case CompareOp::gt: return b < a;
    case CompareOp::ge: return b < a || a == b;
  }
  return false;
}

}  // namespace detail

/// Filter comparison. Numbers compare by value ("21.30" = "21.3"), dates
/// chronologically, strings lexically. IRIs, blank nodes and literals of
/// other datatypes support only = and !=. Any comparison across classes
/// (or an unsupported ordering) is false.
inline bool compare_terms(const rdf::Term& left, CompareOp op, const rdf::Term& right) {
  ValueClass lc = value_class(left), rc = value_class(right);
  if (lc != rc) return false;
  bool ordering = op != CompareOp::eq && op != CompareOp::ne;
  switch (lc) {
    case ValueClass::numeric:
      return detail::apply(op, *numeric_value(left), *numeric_value(right));
    case ValueClass::date:
    case ValueClass::string:
      return detail::apply(op, left.value(), right.value());
    case ValueClass::lang_string:
      if (left.as_literal().language() != right.as_literal().language()) return false;
      return detail::apply(op, left.value(), right.value());
    case ValueClass::other_literal:
      if (ordering || left.as_literal().datatype() != right.as_literal().datatype()) return false;
      return detail::apply(op, left.value(), right.value());
    case ValueClass::iri:
    case ValueClass::blank:
      if (ordering) return false;
      return detail::apply(op, left, right);
  }
  return false;
}

/// ORDER BY key: numbers by value, then dates chronologically, then all
/// other terms by their lexical text.
struct SortKey {
  int rank;
  double number;
  std::string text;

  friend bool operator<(const SortKey& a, const SortKey& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.rank == 0) return a.number < b.number;
    return a.text < b.text;
  }
};

inline SortKey sort_key(const rdf::Term& t) {
  switch (value_class(t)) {
    case ValueClass::numeric: return {0, *numeric_value(t), {}};
    case ValueClass::date: return {1, 0, t.value()};
    default: return {2, 0, t.value()};
  }
}

}  // namespace linkclimate::sparql
