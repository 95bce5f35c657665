#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace crad {

/// Worker count resolution: explicit argument > CRAD_JOBS env var > hardware.
inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("CRAD_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, n).  Work is dealt in fixed-size blocks claimed
/// atomically, so each index is processed exactly once and results written
/// into index-addressed slots are identical for any worker count.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn, std::size_t block = 64) {
  const int workers = resolve_jobs(jobs);
  if (workers <= 1 || n <= block) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&]() {
    for (;;) {
      const std::size_t start = next.fetch_add(block);
      if (start >= n) return;
      const std::size_t end = std::min(start + block, n);
      for (std::size_t i = start; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = static_cast<int>(std::min<std::size_t>(workers, (n + block - 1) / block));
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

}  // namespace crad
