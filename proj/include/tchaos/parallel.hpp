#pragma once
#include <cstddef>
#include <functional>

namespace tchaos {

// Runs fn(i) for i in [0,n) on `workers` threads (0 = hardware concurrency).
// Work is claimed from a shared counter; callers store results by index, so
// the output never depends on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

unsigned resolve_workers(unsigned workers);

}  // namespace tchaos
