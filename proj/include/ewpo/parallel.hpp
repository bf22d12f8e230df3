#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace ewpo {

/// body(i) for i in [0, count) on the OpenMP team. Each index must write only
/// its own outputs. One of the thrown exceptions is rethrown afterwards.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  std::exception_ptr failure;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < count; ++i) {
    if (failure) continue;
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ewpo
