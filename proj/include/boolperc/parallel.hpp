#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace boolperc {

/// Worker count for a request: 0 means one per hardware thread.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/**
 * results[i] = task(i) for i in [0, count), spread over `threads` workers.
 *
 * Worker t handles indices t, t + threads, ...; each result lands in its own
 * slot, so the output never depends on the worker count or on timing. The
 * first exception thrown by any task is rethrown after all workers join.
 */
template <typename T, typename Task>
std::vector<T> parallel_map(std::int64_t count, int threads, Task&& task) {
  std::vector<T> results(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  const int workers = static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(count, 1)));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = task(i);
    return results;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::int64_t i = t; i < count; i += workers) results[static_cast<std::size_t>(i)] = task(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace boolperc
