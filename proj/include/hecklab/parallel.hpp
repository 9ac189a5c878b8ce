#pragma once

#include <exception>
#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#else
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline void omp_set_num_threads(int) {}
#endif

namespace hecklab {

// Runs f(i) for i in [0, n). Parallel when requested and OpenMP is available;
// the serial path is the reference implementation and must produce identical
// results (callers write into per-index slots, no shared accumulation).
template <class F>
void parallel_for(long n, bool parallel, F&& f) {
#if defined(_OPENMP)
  if (parallel && n > 1) {
    std::exception_ptr first;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
#pragma omp critical
        if (!first) first = std::current_exception();
      }
    }
    if (first) std::rethrow_exception(first);
    return;
  }
#endif
  (void)parallel;
  for (long i = 0; i < n; ++i) f(i);
}

}  // namespace hecklab
