#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace pstl {

// Worker count resolution: explicit argument > PSTL_WORKERS env > hardware.
inline int resolve_workers(int requested = 0) {
  if (requested > 0) return std::min(requested, 256);
  if (const char* env = std::getenv("PSTL_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return std::min(v, 256);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(chunk_index, begin, end) over a fixed chunk grid covering [0, n).
// The grid depends only on n and chunk_size, never on the worker count, so
// per-chunk results can be combined in chunk order with bit-identical output
// for any number of threads. fn must not throw.
template <typename ChunkFn>
void for_each_chunk(std::size_t n, std::size_t chunk_size, int workers, ChunkFn fn) {
  if (n == 0) return;
  const std::size_t nchunks = (n + chunk_size - 1) / chunk_size;
  const int nw = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(std::max(1, workers)), nchunks));
  if (nw == 1) {
    for (std::size_t i = 0; i < nchunks; ++i)
      fn(i, i * chunk_size, std::min(n, (i + 1) * chunk_size));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < nchunks; i = next.fetch_add(1))
        fn(i, i * chunk_size, std::min(n, (i + 1) * chunk_size));
    });
  }
  for (auto& t : pool) t.join();
}

// Map-reduce over the same fixed chunk grid; partials combined serially in
// chunk order.
template <typename T, typename MapFn, typename CombineFn>
T reduce_chunks(std::size_t n, std::size_t chunk_size, int workers, T init,
                MapFn map, CombineFn combine) {
  if (n == 0) return init;
  const std::size_t nchunks = (n + chunk_size - 1) / chunk_size;
  std::vector<T> partial(nchunks, init);
  for_each_chunk(n, chunk_size, workers,
                 [&](std::size_t i, std::size_t b, std::size_t e) { partial[i] = map(b, e); });
  T acc = init;
  for (std::size_t i = 0; i < nchunks; ++i) acc = combine(std::move(acc), partial[i]);
  return acc;
}

}  // namespace pstl
