#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nhppclust {

/// Runs f(0..count-1) on up to n_threads workers (0 = hardware concurrency).
/// Tasks must write to disjoint slots; the first exception is rethrown after
/// all workers join.
template <typename F>
void parallel_for(std::size_t count, unsigned n_threads, F&& f) {
  if (count == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = hw == 0 ? 1 : hw;
  n_threads = static_cast<unsigned>(
      std::min<std::size_t>(n_threads, count));

  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (error) std::rethrow_exception(error);
}

}  // namespace nhppclust
