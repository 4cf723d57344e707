#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "isokernel/types.hpp"

namespace isokernel {

// requested <= 0 means "use the hardware count".
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Applies fn(chunk, begin, end) over disjoint chunks of [0, n). Callers that
// combine per-chunk partial results must do so in chunk order; all other
// writes must target per-index locations.
inline void parallel_for_chunks(
    Index n, int threads,
    const std::function<void(int chunk, Index begin, Index end)>& fn) {
  if (n <= 0) return;
  const int nthreads = std::min<int>(resolve_threads(threads), static_cast<int>(n));
  if (nthreads <= 1) {
    fn(0, 0, n);
    return;
  }
  const Index chunk_size = (n + nthreads - 1) / nthreads;
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int c = 0; c < nthreads; ++c) {
    const Index begin = static_cast<Index>(c) * chunk_size;
    const Index end = std::min<Index>(begin + chunk_size, n);
    if (begin >= end) break;
    workers.emplace_back([&, c, begin, end] {
      try {
        fn(c, begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace isokernel
