#pragma once
// Thin OpenMP wrapper. Tasks must be independent and write only their own
// output slots; together with per-task derived seeds this keeps every result
// bit-identical for any worker count, including the serial fallback.

#include <cstddef>

namespace critscan {

// 0 = hardware default
void set_max_jobs(int jobs);
int max_jobs();

namespace detail {
int effective_jobs();
}

template <typename F>
void parallel_for(std::size_t n, F&& fn) {
#ifdef _OPENMP
  const int jobs = detail::effective_jobs();
  if (jobs > 1 && n > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      fn(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

// Serial reference path: always runs in-order on the calling thread.
// Kept separate so benchmarks and tests can compare against the parallel path.
template <typename F>
void serial_for(std::size_t n, F&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace critscan
