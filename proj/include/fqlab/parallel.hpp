#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace fqlab {

// Work-stealing loop over trial indices. Every trial derives its own RNG
// stream from (seed, trial), so assignment of trials to workers cannot change
// any result; fn receives the worker id for per-worker accumulators.
inline void parallel_trials(long long trials, int workers,
                            const std::function<void(long long, int)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || trials < 2) {
    for (long long i = 0; i < trials; ++i) fn(i, 0);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const long long chunk = 64;
        for (;;) {
          long long lo = next.fetch_add(chunk);
          if (lo >= trials || failed.load()) return;
          long long hi = std::min(trials, lo + chunk);
          for (long long i = lo; i < hi; ++i) fn(i, w);
        }
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(error);
}

}  // namespace fqlab
