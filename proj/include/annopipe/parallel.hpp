#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace annopipe {

// Serial execution is the reference path; tests check that the parallel
// kernels produce identical results.
enum class Exec { serial, parallel };

// Runs fn(i) for i in [0, n). Iterations must be independent. In parallel
// mode the exception from the lowest failing index is rethrown after the loop,
// matching what the serial path would report.
template <typename Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
  const auto count = static_cast<long long>(n);
  if (exec == Exec::parallel) {
    std::exception_ptr error;
    long long error_index = count;
    std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  }
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace annopipe
