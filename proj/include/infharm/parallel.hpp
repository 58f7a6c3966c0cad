#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace infharm::detail {

/// Runs f(i) for i in [0, n) on a few threads. If several calls throw, the
/// exception from the smallest index is rethrown, so failures are
/// reproducible regardless of scheduling. `grain` is the minimum number of
/// indices per worker.
template <class F>
void parallel_for(size_t n, F&& f, size_t grain = 32) {
  const size_t hw = std::max<size_t>(1, std::thread::hardware_concurrency());
  const size_t workers = std::min<size_t>(hw, (n + grain - 1) / std::max<size_t>(grain, 1));
  std::mutex mu;
  size_t failed_index = std::numeric_limits<size_t>::max();
  std::exception_ptr failure;

  auto run = [&](size_t start) {
    for (size_t i = start; i < n; i += std::max<size_t>(workers, 1)) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };

  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace infharm::detail
