#pragma once

#include <cstddef>
#include <vector>

namespace spartan {

// Chunk size for deterministic parallel reductions. Chunk partials are
// computed in parallel but folded in index order afterwards, so results
// are bit-identical regardless of the number of threads.
inline constexpr std::size_t kReductionChunk = 8192;

// chunk_fn(begin, end) -> T computes the partial for [begin, end);
// fold(acc, partial) combines partials in chunk order.
template <class T, class ChunkFn, class FoldFn>
T chunked_reduce(std::size_t n, T init, ChunkFn&& chunk_fn, FoldFn&& fold) {
  if (n == 0) return init;
  const std::size_t nchunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<T> partial(nchunks);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t e = b + kReductionChunk < n ? b + kReductionChunk : n;
    partial[static_cast<std::size_t>(c)] = chunk_fn(b, e);
  }
  T acc = init;
  for (const T& p : partial) acc = fold(acc, p);
  return acc;
}

}  // namespace spartan
