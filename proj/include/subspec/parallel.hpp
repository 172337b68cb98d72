#ifndef SUBSPEC_PARALLEL_HPP
#define SUBSPEC_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace subspec {

/// Runs body(begin, end) over [0, count) split into `threads` contiguous
/// blocks. Blocks write disjoint outputs; callers reduce in index order
/// afterwards, so results never depend on the thread count. The first
/// exception thrown by any block is rethrown on the calling thread.
template <typename Body>
void parallel_blocks(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }
  const std::size_t blocks = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = count * b / blocks;
    const std::size_t hi = count * (b + 1) / blocks;
    pool.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace subspec

#endif  // SUBSPEC_PARALLEL_HPP
