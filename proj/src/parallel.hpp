#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace pyroclass::detail {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. The first exception
/// (by index) is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    const std::size_t n_threads = std::min<std::size_t>(workers, count);
    for (std::size_t t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++)
          run(i);
      });
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace pyroclass::detail
