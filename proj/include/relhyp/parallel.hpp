#pragma once

#include <cstddef>
#include <functional>

namespace relhyp {

/// Worker count: RELHYP_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is
/// handled exactly once; callers write results into per-index slots so the
/// merged output does not depend on scheduling. The exception thrown for the
/// smallest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace relhyp
