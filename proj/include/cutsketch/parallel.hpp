#pragma once

#include <cstddef>
#include <functional>

namespace cutsketch {

/// Worker count: CUTSKETCH_THREADS if set (>= 1), else hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, count) across up to thread_count() threads.
/// The first exception thrown by any body is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cutsketch
