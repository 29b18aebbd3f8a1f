#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace dampedwave {

/// Index-parallel loop over pure work items; results must be written to
/// pre-sized slots so ordering stays deterministic for any thread count.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nt);
  for (std::size_t w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += nt) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dampedwave
