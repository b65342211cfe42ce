#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace cbbc {

inline unsigned default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Runs fn(begin, end) over a partition of [0, n) on `threads` workers.
/// Shards are a pure function of (n, threads), so per-shard results merged in
/// shard order are scheduling-independent.
template <typename F>
void parallel_for(size_t n, unsigned threads, F fn) {
  if (n == 0) return;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    fn(size_t(0), n, size_t(0));
    return;
  }
  std::vector<std::thread> pool;
  size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    size_t b = t * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([=]() { fn(b, e, static_cast<size_t>(t)); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cbbc
