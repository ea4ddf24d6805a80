#pragma once

#include <cstddef>
#include <functional>

namespace rlab {

/// Worker count: hardware concurrency, capped by RIGIDITY_LAB_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into per-index slots so the outcome is thread-count independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rlab
