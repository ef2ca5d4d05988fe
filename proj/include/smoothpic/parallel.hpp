#pragma once

#include <cstddef>
#include <functional>

namespace smoothpic {

/// Worker count from SMOOTHPIC_THREADS (default 1, clamped to [1, 64]).
int worker_count();

/// Runs body(i) for i in [0, n). Each index is handled by exactly one
/// worker, so per-index results are identical to the serial loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace smoothpic
