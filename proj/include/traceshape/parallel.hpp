#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace traceshape {

/// Worker count for per-sensor fan-out; override with TRACESHAPE_WORKERS.
inline int worker_count() {
  if (const char* env = std::getenv("TRACESHAPE_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run f(i) for i in [0, n) on the worker pool. Results must be written to
/// pre-sized slots so the output order does not depend on scheduling.
template <typename F>
void parallel_for(int n, F&& f) {
  int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace traceshape
