#pragma once

#include <memory>
#include <mutex>

#include "linkclimate/rdf/graph.hpp"

namespace linkclimate::rdf {

/// Shared graph with snapshot isolation. Readers hold an immutable snapshot
/// for as long as they need it; a writer builds a new graph and publishes it
/// atomically. Only one writer at a time (see WriteLock).
class Store {
 public:
  Store() : current_(std::make_shared<const Graph>()) {}
  explicit Store(Graph graph) : current_(std::make_shared<const Graph>(std::move(graph))) {}

  std::shared_ptr<const Graph> snapshot() const {
    std::lock_guard lock(mutex_);
    return current_;
  }

  void publish(Graph graph) {
    auto next = std::make_shared<const Graph>(std::move(graph));
    std::lock_guard lock(mutex_);
    current_ = std::move(next);
  }

  // Serializes writers.
  using WriteLock = std::unique_lock<std::mutex>;
  WriteLock lock_for_write() { return WriteLock(writer_); }
  WriteLock try_lock_for_write() { return WriteLock(writer_, std::try_to_lock); }

 private:
  mutable std::mutex mutex_;
  std::mutex writer_;
  std::shared_ptr<const Graph> current_;
};

}  // namespace linkclimate::rdf
