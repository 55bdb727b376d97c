#pragma once

#include <cstddef>
#include <functional>

namespace frontfix::harness {

/// Worker count for `jobs` independent tasks: hardware concurrency capped
/// by SOLVER_THREADS (when set to a positive integer) and by `jobs`.
std::size_t worker_count(std::size_t jobs);

/// Runs fn(0) .. fn(n-1) across the pool. Each index runs exactly once;
/// results must be written to per-index slots so aggregation stays in
/// configuration order. The first exception is rethrown after all workers
/// finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace frontfix::harness
