#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace irslab::parallel {

/// Worker count used by the per-atom and per-sample loops. Defaults to the
/// IRSLAB_WORKERS environment variable, or 1 when unset. Results never
/// depend on this value.
unsigned workers();
void set_workers(unsigned count);

namespace detail {
/// Set on pool threads; nested loops run serially on the calling worker.
bool& inside_pool();
}  // namespace detail

/// Calls fn(i) for every i in [0, n), splitting the range into contiguous
/// chunks across workers. fn must only write to per-index state. The first
/// exception thrown by any worker is rethrown after all workers finish.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  const std::size_t w = detail::inside_pool() ? 1 : std::min<std::size_t>(workers(), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    const std::size_t chunk = (n + w - 1) / w;
    for (std::size_t t = 0; t < w; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&fn, &failure, &failure_mutex, lo, hi] {
        detail::inside_pool() = true;
        try {
          for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace irslab::parallel
