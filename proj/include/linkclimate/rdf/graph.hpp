#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "linkclimate/rdf/term.hpp"

namespace linkclimate::rdf {

// std::nullopt is a wildcard.
using TermPattern = std::optional<Term>;

/// Set of triples with subject, predicate and object indexes.
///
/// Index entries point into the node-based triple set, so copies rebuild
/// them. Iteration and match() results follow the global term ordering.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph& other) { *this = other; }
  Graph(Graph&&) noexcept = default;
  Graph& operator=(Graph&&) noexcept = default;
  Graph& operator=(const Graph& other) {
    if (this == &other) return *this;
    triples_.clear();
    for (auto& index : indexes_) index.clear();
    for (const auto& t : other.triples_) insert(t);
    return *this;
  }

  template <typename It>
  Graph(It first, It last) {
    for (; first != last; ++first) insert(*first);
  }

  // Returns true iff the triple was absent.
  bool insert(const Triple& triple) {
    auto [it, inserted] = triples_.insert(triple);
    if (inserted) {
      const Triple* ptr = &*it;
      indexes_[0][ptr->subject].insert(ptr);
      indexes_[1][ptr->predicate].insert(ptr);
      indexes_[2][ptr->object].insert(ptr);
    }
    return inserted;
  }

  bool erase(const Triple& triple) {
    auto it = triples_.find(triple);
    if (it == triples_.end()) return false;
    const Triple* ptr = &*it;
    unindex(0, ptr->subject, ptr);
    unindex(1, ptr->predicate, ptr);
    unindex(2, ptr->object, ptr);
    triples_.erase(it);
    return true;
  }

  // Inserts every triple of other; returns how many were new.
  std::size_t merge(const Graph& other) {
    std::size_t added = 0;
    for (const auto& t : other) added += insert(t) ? 1 : 0;
    return added;
  }

  bool contains(const Triple& triple) const { return triples_.count(triple) != 0; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  std::set<Triple>::const_iterator begin() const noexcept { return triples_.begin(); }
  std::set<Triple>::const_iterator end() const noexcept { return triples_.end(); }

  /// Calls fn(const Triple&) for each triple matching the bound positions.
  /// The smallest index among the bound positions drives the scan.
  template <typename Fn>
  void for_each_match(const TermPattern& s, const TermPattern& p, const TermPattern& o, Fn&& fn) const {
    const std::array<const TermPattern*, 3> bound{&s, &p, &o};
    const std::set<const Triple*, PtrLess>* best = nullptr;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!*bound[i]) continue;
      auto it = indexes_[i].find(**bound[i]);
      if (it == indexes_[i].end()) return;
      if (!best || it->second.size() < best->size()) best = &it->second;
    }
    auto accept = [&](const Triple& t) {
      return (!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o);
    };
    if (!best) {
      for (const auto& t : triples_) fn(t);
      return;
    }
    for (const Triple* t : *best)
      if (accept(*t)) fn(*t);
  }

  std::vector<Triple> match(const TermPattern& s = {}, const TermPattern& p = {},
                            const TermPattern& o = {}) const {
    std::vector<Triple> out;
    for_each_match(s, p, o, [&](const Triple& t) { out.push_back(t); });
    return out;
  }

  std::size_t count(const TermPattern& s = {}, const TermPattern& p = {}, const TermPattern& o = {}) const {
    std::size_t n = 0;
    for_each_match(s, p, o, [&](const Triple&) { ++n; });
    return n;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.triples_ == b.triples_; }

 private:
  struct PtrLess {
    bool operator()(const Triple* a, const Triple* b) const { return *a < *b; }
  };
  using Index = std::unordered_map<Term, std::set<const Triple*, PtrLess>>;

  void unindex(std::size_t which, const Term& key, const Triple* ptr) {
    auto it = indexes_[which].find(key);
    if (it == indexes_[which].end()) return;
    it->second.erase(ptr);
    if (it->second.empty()) indexes_[which].erase(it);
  }

  std::set<Triple> triples_;
  std::array<Index, 3> indexes_;
};

}  // namespace linkclimate::rdf
