#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace dickeqfi {

/// Worker count: a positive request is taken as is, 0 means all logical cores.
int resolve_jobs(int requested);

/// Runs task(i) for i in [0, count) on up to `jobs` threads. Each index is
/// handled exactly once; the first exception thrown by a task is rethrown
/// after all workers join.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

/// Ordered map: slot i of the result always holds fn(i), whatever the
/// scheduling, so downstream reductions can run in a fixed order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, int jobs, Fn&& fn) {
  std::vector<T> out(count);
  parallel_for(count, jobs, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace dickeqfi
