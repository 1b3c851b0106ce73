#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace spt {

/// Number of workers to use when the caller asks for "default" (0).
inline int default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs job(i) for i in [0, count) on up to `workers` threads and returns the
/// results in index order. The first exception (lowest index) is rethrown
/// after all workers finish.
template <class Result>
std::vector<Result> parallel_map(std::size_t count, int workers, const std::function<Result(std::size_t)>& job) {
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 0) workers = default_worker_count();
  const auto n_threads = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (n_threads <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(run);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace spt
