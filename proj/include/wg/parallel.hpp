// Element-loop execution: OpenMP-parallel map over cells with a serial
// reference path kept for testing. Per-cell results land in preallocated
// slots, so the reduction order (and therefore the assembled system) is
// identical in both modes.

#ifndef WG_PARALLEL_HPP
#define WG_PARALLEL_HPP

#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wg {

enum class Exec { Serial, Parallel };

/// Process-wide default execution mode for element loops.
Exec default_exec();
void set_default_exec(Exec mode);

template <typename Fn>
void for_each_cell(Exec mode, int n, Fn&& fn) {
#ifdef _OPENMP
  if (mode == Exec::Parallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return;
  }
#else
  (void)mode;
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

/// Map cells to values in index order.
template <typename T, typename Fn>
std::vector<T> map_cells(Exec mode, int n, Fn&& fn) {
  std::vector<T> out(n);
  for_each_cell(mode, n, [&](int i) { out[i] = fn(i); });
  return out;
}

}  // namespace wg

#endif
