#include "critscan/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace critscan {

namespace {
std::atomic<int> g_jobs{0};
}

void set_max_jobs(int jobs) { g_jobs.store(jobs < 0 ? 0 : jobs); }

int max_jobs() { return g_jobs.load(); }

namespace detail {
int effective_jobs() {
  const int j = g_jobs.load();
  if (j > 0) return j;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}
}  // namespace detail

}  // namespace critscan
