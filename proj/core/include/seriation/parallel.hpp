#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace seriation {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Static range split. fn(lo, hi) must only write state that is disjoint
// across chunks (or reduce afterwards); that keeps results independent of
// the thread count.
template <typename Fn>
void parallel_chunks(std::int64_t begin, std::int64_t end, int threads, Fn&& fn) {
  const std::int64_t total = end - begin;
  if (total <= 0) return;
  threads = resolve_threads(threads);
  if (threads <= 1 || total == 1) {
    fn(begin, end);
    return;
  }
  const std::int64_t nchunk = std::min<std::int64_t>(threads, total);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nchunk));
  for (std::int64_t c = 0; c < nchunk; ++c) {
    const std::int64_t lo = begin + total * c / nchunk;
    const std::int64_t hi = begin + total * (c + 1) / nchunk;
    pool.emplace_back([lo, hi, &fn] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace seriation
