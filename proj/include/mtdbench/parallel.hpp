#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mtdbench {

// Heavy kernels (O-DAP brute force, all-VM betweenness, sweeps) exist in two
// forms: an OpenMP one and a serial reference. Both produce identical output;
// the serial path is kept as the comparison baseline for tests and for the
// benchmark tool.
enum class ExecMode { kSerial, kParallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Applies the MTDBENCH_THREADS cap if the variable is set to a positive
// integer. Called once from tool entry points.
inline void apply_thread_cap_from_env() {
#ifdef _OPENMP
  if (const char* raw = std::getenv("MTDBENCH_THREADS")) {
    const int cap = std::atoi(raw);
    if (cap > 0 && cap < omp_get_max_threads()) {
      omp_set_num_threads(cap);
    }
  }
#endif
}

}  // namespace mtdbench
