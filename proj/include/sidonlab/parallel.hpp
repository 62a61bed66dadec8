#pragma once

#include <cstddef>
#include <functional>

namespace sidonlab {

/// Worker count: SIDONLAB_THREADS when set (>= 1), otherwise the hardware
/// concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Callers
/// write into per-index slots; the first exception (by index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sidonlab
