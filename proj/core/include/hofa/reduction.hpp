#pragma once

// Deterministic summation for all big averages: terms are grouped into
// fixed chunks of 1024, each chunk is summed left to right, and the chunk
// sums are combined by a pairwise tree in chunk order. The result depends
// only on the term order, never on the thread count.

#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

namespace hofa {

inline constexpr std::uint64_t kReductionChunk = 1024;

namespace detail {

inline std::complex<double> pairwise_combine(std::vector<std::complex<double>>& sums) {
  if (sums.empty()) return {0.0, 0.0};
  while (sums.size() > 1) {
    std::size_t half = (sums.size() + 1) / 2;
    for (std::size_t i = 0; i + half < sums.size(); ++i) sums[i] += sums[i + half];
    // Pair block i with block i+half; the tail block carries through.
    std::vector<std::complex<double>> next(sums.begin(), sums.begin() + half);
    sums.swap(next);
  }
  return sums[0];
}

}  // namespace detail

// Sum of term(i) for i in [0, count), reproducible across thread counts.
template <class TermFn>
std::complex<double> pairwise_sum(std::uint64_t count, TermFn&& term,
                                  unsigned max_threads = std::thread::hardware_concurrency()) {
  const std::uint64_t num_chunks = (count + kReductionChunk - 1) / kReductionChunk;
  std::vector<std::complex<double>> chunk_sums(static_cast<std::size_t>(num_chunks));

  auto fill_range = [&](std::uint64_t chunk_begin, std::uint64_t chunk_end) {
    for (std::uint64_t c = chunk_begin; c < chunk_end; ++c) {
      const std::uint64_t lo = c * kReductionChunk;
      const std::uint64_t hi = std::min(count, lo + kReductionChunk);
      std::complex<double> acc{0.0, 0.0};
      for (std::uint64_t i = lo; i < hi; ++i) acc += term(i);
      chunk_sums[static_cast<std::size_t>(c)] = acc;
    }
  };

  unsigned threads = max_threads == 0 ? 1 : max_threads;
  if (count < (std::uint64_t(1) << 16) || threads <= 1 || num_chunks < 2) {
    fill_range(0, num_chunks);
  } else {
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, num_chunks));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t per = (num_chunks + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t lo = t * per;
      const std::uint64_t hi = std::min<std::uint64_t>(num_chunks, lo + per);
      if (lo >= hi) break;
      pool.emplace_back(fill_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return detail::pairwise_combine(chunk_sums);
}

// Mean of term(i) over i in [0, count).
template <class TermFn>
std::complex<double> pairwise_mean(std::uint64_t count, TermFn&& term,
                                   unsigned max_threads = std::thread::hardware_concurrency()) {
  return pairwise_sum(count, std::forward<TermFn>(term), max_threads) /
         static_cast<double>(count);
}

}  // namespace hofa
