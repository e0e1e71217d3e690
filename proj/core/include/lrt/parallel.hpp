#pragma once

#include <cstddef>
#include <functional>

namespace lrt {

/// Worker count from LRT_THREADS (default 1, capped at hardware concurrency
/// when that is known).
std::size_t worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Work items
/// must write to disjoint outputs; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lrt
