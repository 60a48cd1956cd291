#pragma once

/// @file parallel.hpp
/// @brief Minimal worker pool for independent tasks.

#include <functional>

namespace mdfc {

/// Worker count: MDFC_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
int worker_count();

/// Run fn(0..n-1) on up to worker_count() threads. The first exception
/// thrown by a task is rethrown after all workers stop.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace mdfc
