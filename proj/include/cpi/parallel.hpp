#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace cpi {

// Runs fn(i) for i in [0, n) on up to n_threads threads.  Results must be
// written to caller-owned slots indexed by i, so assembly order is
// deterministic regardless of the thread count.
inline void parallel_for_indexed(int n, int n_threads,
                                 const std::function<void(int)>& fn) {
  if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (n_threads == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  n_threads = std::min(n_threads, n);
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&](int t) {
    try {
      for (int i = t; i < n; i += n_threads) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_threads - 1);
  for (int t = 1; t < n_threads; ++t) threads.emplace_back(worker, t);
  worker(0);
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace cpi
