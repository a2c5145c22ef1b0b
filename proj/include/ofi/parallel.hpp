#pragma once

// Blocked execution for the sampling kernels.
//
// Work of size n is cut into fixed-size blocks; block b always owns the RNG
// stream (seed, b) and writes a disjoint output range. The block layout does
// not depend on the thread count, so the serial and OpenMP paths produce
// bit-identical results.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ofi {

enum class Exec { Serial, Parallel };

inline constexpr std::size_t kBlockSize = 4096;

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline std::size_t block_count(std::size_t n, std::size_t block = kBlockSize) {
  return (n + block - 1) / block;
}

/// Calls fn(block_index, begin, end) for every block. Exceptions thrown in a
/// worker are rethrown on the calling thread (first one wins).
template <class Fn>
void for_blocks(std::size_t n, Exec exec, Fn&& fn, std::size_t block = kBlockSize) {
  const std::size_t nb = block_count(n, block);
  if (exec == Exec::Serial || nb <= 1) {
    for (std::size_t b = 0; b < nb; ++b) fn(b, b * block, std::min(n, (b + 1) * block));
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long bi = 0; bi < static_cast<long long>(nb); ++bi) {
    const auto b = static_cast<std::size_t>(bi);
    try {
      fn(b, b * block, std::min(n, (b + 1) * block));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

/// Index-parallel loop for deterministic per-element kernels (grids, chains).
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
    try {
      fn(static_cast<std::size_t>(ii));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace ofi
