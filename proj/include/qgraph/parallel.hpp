#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace qgraph {

/// Selects the serial reference loop or the OpenMP loop for the independent
/// per-item kernels (radius sweeps, topology search). Both write results by
/// index, so the output does not depend on the choice or the thread count.
enum class Execution { serial, parallel };

/// Calls body(i) for i in [0, n). The exception of the lowest failing index
/// is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  if (exec == Execution::parallel) {
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void set_thread_count(int threads);
[[nodiscard]] int thread_count();

}  // namespace qgraph
