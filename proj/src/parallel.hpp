#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace riskdiff::detail {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Callers write to
// disjoint preallocated slots, so the result layout is identical for any
// worker count.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace riskdiff::detail
