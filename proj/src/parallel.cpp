#include "cascade/parallel.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cascade {

int resolve_threads(int requested) {
#ifdef _OPENMP
  int n = requested > 0 ? requested : omp_get_max_threads();
  if (const char* env = std::getenv("CASCADE_FPE_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
#else
  (void)requested;
  return 1;
#endif
}

}  // namespace cascade
