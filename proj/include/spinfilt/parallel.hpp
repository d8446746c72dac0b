#ifndef SPINFILT_PARALLEL_HPP_
#define SPINFILT_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spinfilt {

/// out[i] = fn(i) for i in [0, count), evaluated on up to `threads` workers
/// (0 = hardware concurrency). Each slot is written by exactly one worker, so the
/// result does not depend on scheduling. The first exception thrown is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn fn, unsigned threads = 0) {
  std::vector<T> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace spinfilt

#endif  // SPINFILT_PARALLEL_HPP_
