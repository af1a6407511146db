#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lpt {

/// Runs fn(i) for i in [0, total). Work is split by stride over up to eight
/// threads once total reaches `threshold`. If any call throws, the exception
/// from the lowest index is rethrown, so errors match a sequential run.
template <class F>
void parallel_for(std::size_t total, F&& fn, std::size_t threshold = 256) {
  const std::size_t workers =
      total < threshold ? 1 : std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t failed_at = total;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < total; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < failed_at) {
            failed_at = i;
            failure = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lpt
