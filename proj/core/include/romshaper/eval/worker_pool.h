#pragma once

#include <functional>

namespace romshaper {

/// Runs fn(0) ... fn(count - 1) on up to `workers` threads. Indices are
/// claimed dynamically, so results must be written by index. The exception
/// of the lowest failing index is rethrown after all workers join.
class WorkerPool {
 public:
  /// workers <= 0 selects the hardware concurrency.
  explicit WorkerPool(int workers = 0);

  int workers() const { return workers_; }
  void ParallelFor(int count, const std::function<void(int)>& fn) const;

 private:
  int workers_;
};

}  // namespace romshaper
