#ifndef CHANCEKIT_PARALLEL_HPP
#define CHANCEKIT_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace chancekit {

// Runs fn(0..n-1), strided across up to `threads` workers. Each index is
// processed exactly once; callers write results into index-addressed
// slots, so the outcome is identical to the serial loop.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&fn, w, workers, n] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace chancekit

#endif  // CHANCEKIT_PARALLEL_HPP
