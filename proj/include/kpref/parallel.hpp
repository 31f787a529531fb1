#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace kpref {

/// Number of fixed-size accumulation chunks used by deterministic reductions.
/// Independent of the thread count, so results never depend on how many
/// threads executed the loop.
inline constexpr std::size_t kReductionChunks = 64;

/// Half-open index range [first, second) of chunk `chunk` when `n` elements
/// are split into `nchunks` nearly equal contiguous chunks.
inline std::pair<std::size_t, std::size_t> chunk_range(std::size_t n,
                                                       std::size_t chunk,
                                                       std::size_t nchunks) {
  const std::size_t base = n / nchunks;
  const std::size_t rem = n % nchunks;
  const std::size_t begin = chunk * base + (chunk < rem ? chunk : rem);
  const std::size_t len = base + (chunk < rem ? 1 : 0);
  return {begin, begin + len};
}

/// Sum of a span in a fixed pairwise order (split in half, recurse, add).
/// The evaluation tree depends only on the span length, so the result is
/// identical regardless of threading and more accurate than left-to-right.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace kpref
