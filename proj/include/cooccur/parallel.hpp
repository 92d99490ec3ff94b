#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cooccur {

// Worker count: min(hardware, COOCCUR_LAB_THREADS). The env var caps
// parallelism; 0 or unset means auto.
inline unsigned effective_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("COOCCUR_LAB_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0 && cap < hw) return static_cast<unsigned>(cap);
  }
  return hw;
}

// Runs fn(i) for i in [0, n), split into contiguous chunks across threads.
// Caller-visible state must be written by index only, so the result is
// identical at any worker count. fn must not throw; validate inputs first.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = effective_threads();
  if (n == 0) return;
  if (workers <= 1 || n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cooccur
