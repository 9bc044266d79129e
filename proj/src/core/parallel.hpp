// Deterministic parallelism helpers.
//
// Work is split into fixed-size chunks whose boundaries do not depend on the
// worker count, and reductions merge per-chunk partials in chunk order, so a
// run produces bit-identical results whether SPDML_THREADS is 1 or 64.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace spdml {

// Worker count: SPDML_THREADS if set to a positive integer, otherwise the
// hardware concurrency. Always at least 1.
int thread_count();

// Runs body(chunk_index, begin, end) over [0, count) split into fixed chunks.
// Blocks until every chunk finished. If chunks throw, the exception from the
// lowest chunk index is rethrown so failures are reproducible.
void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& body);

// Deterministic parallel reduction. item(i, acc) accumulates element i into
// the chunk-local accumulator; merge folds the partials together in chunk
// order on the calling thread.
template <typename T, typename Item, typename Merge>
T parallel_reduce(std::size_t count, std::size_t chunk_size, T init,
                  const Item& item, const Merge& merge) {
  if (count == 0) return init;
  const std::size_t num_chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<T> partials(num_chunks, init);
  parallel_chunks(count, chunk_size,
                  [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                    T& acc = partials[chunk];
                    for (std::size_t i = begin; i < end; ++i) item(i, acc);
                  });
  T total = init;
  for (const T& partial : partials) merge(total, partial);
  return total;
}

}  // namespace spdml
