#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "linkclimate/rdf/term.hpp"

namespace linkclimate::sparql {

struct Variable {
  std::string name;  // without the leading '?'

  friend auto operator<=>(const Variable&, const Variable&) = default;
  friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<rdf::Term, Variable>;

inline const Variable* as_variable(const PatternTerm& t) { return std::get_if<Variable>(&t); }

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class CompareOp { eq, ne, lt, le, gt, ge };

inline const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "!=";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
  }
  return "?";
}

struct FilterExpr {
  Variable left;
  CompareOp op;
  rdf::Term right;

  friend bool operator==(const FilterExpr&, const FilterExpr&) = default;
};

struct OrderBy {
  Variable variable;
  bool ascending = true;

  friend bool operator==(const OrderBy&, const OrderBy&) = default;
};

struct QueryAst {
  std::map<std::string, std::string> prefixes;
  bool distinct = false;
  bool select_all = false;             // SELECT *
  std::vector<Variable> projection;    // empty when select_all
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
  std::optional<OrderBy> order_by;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> offset;

  /// Variables in order of first appearance across the patterns.
  std::vector<Variable> pattern_variables() const {
    std::vector<Variable> vars;
    auto note = [&](const PatternTerm& t) {
      if (auto v = as_variable(t); v && std::find(vars.begin(), vars.end(), *v) == vars.end())
        vars.push_back(*v);
    };
    for (const auto& p : patterns) {
      note(p.subject);
      note(p.predicate);
      note(p.object);
    }
    return vars;
  }

  /// The projection with "*" resolved.
  std::vector<Variable> projected_variables() const {
    return select_all ? pattern_variables() : projection;
  }
};

/// One result row: variable name -> bound term.
struct Solution {
  std::map<std::string, rdf::Term> bindings;

  friend auto operator<=>(const Solution&, const Solution&) = default;
  friend bool operator==(const Solution&, const Solution&) = default;
};

}  // namespace linkclimate::sparql
