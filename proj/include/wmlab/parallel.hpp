#pragma once
//----------------------------------------------------------------------------
// parallel.hpp
//
// Thin OpenMP wrapper used by the compute kernels.  Every kernel is written
// against parallel_for so it has exactly two execution paths: the OpenMP one
// and a plain serial loop kept as the reference implementation.  Tests compare
// the two for bitwise agreement and the bench target compares their timings.
//
// All kernels parallelise over independent output slots (grid columns,
// characteristics, mesh cells) and never reduce across threads, so results are
// identical for any thread count.
//----------------------------------------------------------------------------

#include <cstddef>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wmlab {

enum class ExecPolicy { kParallel, kSerial };

/// Process-wide default policy; flipped by tests and the bench tool.
ExecPolicy& default_exec_policy();

template <typename Body>
void parallel_for(std::size_t n, const Body& body,
                  ExecPolicy policy = default_exec_policy()) {
#ifdef _OPENMP
  if (policy == ExecPolicy::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)policy;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace wmlab
