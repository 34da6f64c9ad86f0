#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rtn {

// Thread cap: hardware concurrency, overridable by RELU_TRANSPORT_THREADS.
inline int thread_budget() {
  int n = (int)std::thread::hardware_concurrency();
  if (n < 1) n = 1;
  if (const char* env = std::getenv("RELU_TRANSPORT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

// Runs fn(worker_index, begin, end) over a static partition of [0, count).
inline void parallel_chunks(long count,
                            const std::function<void(int, long, long)>& fn) {
  const int workers = (int)std::min<long>(thread_budget(), std::max<long>(1, count));
  if (workers <= 1) {
    fn(0, 0, count);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long b = w * chunk, e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, w, b, e);
  }
  for (auto& t : pool) t.join();
}

}  // namespace rtn
