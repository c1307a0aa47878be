#pragma once

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>
#include <vector>

#include "linkclimate/rdf/graph.hpp"
#include "linkclimate/sparql/ast.hpp"
#include "linkclimate/sparql/compare.hpp"

namespace linkclimate::sparql {

struct EvaluationLimits {
  std::size_t max_solutions = std::numeric_limits<std::size_t>::max();
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct EvaluationResult {
  std::vector<Solution> solutions;
  bool truncated = false;  // hit max_solutions or the deadline
};

namespace detail {

class Evaluator {
 public:
  Evaluator(const QueryAst& ast, const rdf::Graph& graph, const EvaluationLimits& limits)
      : ast_(ast), graph_(graph), limits_(limits), vars_(ast.pattern_variables()) {
    // Each filter runs right after the first pattern that binds its variable.
    filters_after_.resize(ast_.patterns.size());
    for (const auto& f : ast_.filters) {
      std::size_t bound_at = 0;
      for (std::size_t i = 0; i < ast_.patterns.size(); ++i) {
        const auto& p = ast_.patterns[i];
        if (uses(p, f.left)) {
          bound_at = i;
          break;
        }
      }
      filters_after_[bound_at].push_back(&f);
    }
    row_.resize(vars_.size());
    // Without reordering or deduplication the first offset+limit rows are final.
    if (!ast_.order_by && !ast_.distinct && ast_.limit) enough_ = ast_.offset.value_or(0) + *ast_.limit;
  }

  EvaluationResult run() {
    EvaluationResult result;
    join(0, result);
    return result;
  }

 private:
  static bool uses(const TriplePattern& p, const Variable& v) {
    auto is = [&](const PatternTerm& t) { auto pv = as_variable(t); return pv && *pv == v; };
    return is(p.subject) || is(p.predicate) || is(p.object);
  }

  std::size_t slot(const Variable& v) const {
    return static_cast<std::size_t>(std::find(vars_.begin(), vars_.end(), v) - vars_.begin());
  }

  rdf::TermPattern resolve(const PatternTerm& t) const {
    if (auto v = as_variable(t)) return row_[slot(*v)];
    return std::get<rdf::Term>(t);
  }

  bool out_of_budget(EvaluationResult& result) {
    if (result.truncated || done_) return true;
    if (enough_ && result.solutions.size() >= *enough_) {
      done_ = true;
      return true;
    }
    if (result.solutions.size() >= limits_.max_solutions) {
      result.truncated = true;
      return true;
    }
    if (limits_.deadline && (steps_++ & 0x3FF) == 0 && std::chrono::steady_clock::now() > *limits_.deadline) {
      result.truncated = true;
      return true;
    }
    return false;
  }

  void join(std::size_t depth, EvaluationResult& result) {
    if (out_of_budget(result)) return;
    if (depth == ast_.patterns.size()) {
      Solution s;
      for (std::size_t i = 0; i < vars_.size(); ++i) s.bindings.emplace(vars_[i].name, *row_[i]);
      result.solutions.push_back(std::move(s));
      return;
    }
    const TriplePattern& p = ast_.patterns[depth];
    rdf::TermPattern s = resolve(p.subject), pr = resolve(p.predicate), o = resolve(p.object);
    // Collect first so the callback does not recurse into the graph iteration.
    std::vector<rdf::Triple> matches = graph_.match(s, pr, o);
    for (const auto& t : matches) {
      std::vector<std::size_t> newly_bound;
      if (bind(p.subject, t.subject, newly_bound) && bind(p.predicate, t.predicate, newly_bound) &&
          bind(p.object, t.object, newly_bound) && filters_hold(depth)) {
        join(depth + 1, result);
      }
      for (auto i : newly_bound) row_[i].reset();
      if (result.truncated || done_) return;
    }
  }

  bool bind(const PatternTerm& pt, const rdf::Term& value, std::vector<std::size_t>& newly_bound) {
    auto v = as_variable(pt);
    if (!v) return true;
    std::size_t i = slot(*v);
    if (row_[i]) return *row_[i] == value;
    row_[i] = value;
    newly_bound.push_back(i);
    return true;
  }

  bool filters_hold(std::size_t depth) const {
    for (const FilterExpr* f : filters_after_[depth])
      if (!compare_terms(*row_[slot(f->left)], f->op, f->right)) return false;
    return true;
  }

  const QueryAst& ast_;
  const rdf::Graph& graph_;
  const EvaluationLimits& limits_;
  std::vector<Variable> vars_;
  std::vector<std::vector<const FilterExpr*>> filters_after_;
  std::vector<std::optional<rdf::Term>> row_;
  std::optional<std::size_t> enough_;
  bool done_ = false;
  std::size_t steps_ = 0;
};

inline Solution project(const Solution& s, const std::vector<Variable>& projection) {
  Solution out;
  for (const auto& v : projection)
    if (auto it = s.bindings.find(v.name); it != s.bindings.end()) out.bindings.emplace(v.name, it->second);
  return out;
}

}  // namespace detail

/// Evaluates the basic graph pattern left to right, then applies DISTINCT,
/// ORDER BY, OFFSET and LIMIT in that sequence, then projects.
inline EvaluationResult evaluate(const QueryAst& ast, const rdf::Graph& graph, const EvaluationLimits& limits) {
  EvaluationResult result = detail::Evaluator(ast, graph, limits).run();
  std::vector<Solution>& rows = result.solutions;
  const auto projection = ast.projected_variables();

  if (ast.distinct) {
    std::set<Solution> seen;
    std::vector<Solution> unique;
    for (auto& row : rows)
      if (seen.insert(detail::project(row, projection)).second) unique.push_back(std::move(row));
    rows = std::move(unique);
  }
  if (ast.order_by) {
    const std::string& name = ast.order_by->variable.name;
    bool ascending = ast.order_by->ascending;
    std::stable_sort(rows.begin(), rows.end(), [&](const Solution& a, const Solution& b) {
      SortKey ka = sort_key(a.bindings.at(name)), kb = sort_key(b.bindings.at(name));
      return ascending ? ka < kb : kb < ka;
    });
  }
  std::size_t first = std::min(rows.size(), ast.offset.value_or(0));
  std::size_t count = std::min(rows.size() - first, ast.limit.value_or(rows.size()));
  std::vector<Solution> out;
  out.reserve(count);
  for (std::size_t i = first; i < first + count; ++i) out.push_back(detail::project(rows[i], projection));
  rows = std::move(out);
  return result;
}

inline std::vector<Solution> evaluate(const QueryAst& ast, const rdf::Graph& graph) {
  return evaluate(ast, graph, EvaluationLimits{}).solutions;
}

}  // namespace linkclimate::sparql
