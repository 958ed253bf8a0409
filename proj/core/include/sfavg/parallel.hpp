#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sfavg {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

/// Run body(i) for i in [0, n). Work items must be independent; callers that
/// collect results write them into per-index slots so the merged output does
/// not depend on scheduling.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& body) {
  const int t = resolve_threads(threads);
  if (t <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = int(std::min<std::size_t>(std::size_t(t), n));
  pool.reserve(std::size_t(workers));
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::scoped_lock lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sfavg
