#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qdi {

// Runs fn(i) for i in [0, n).  Work is partitioned into contiguous blocks,
// one per worker; fn must make element i depend only on i (substream RNG),
// so the result is identical for any worker count.
template <typename Fn>
void parallel_for(std::uint64_t n, Fn&& fn, unsigned n_threads = 0) {
  if (n == 0) return;
  unsigned hw = n_threads ? n_threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(hw, n));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t block = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = static_cast<std::uint64_t>(w) * block;
    const std::uint64_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::uint64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qdi
