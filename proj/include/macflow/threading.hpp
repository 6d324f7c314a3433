#pragma once

#include <functional>

namespace macflow {

/// Worker count for parallel loops: MACFLOW_THREADS if set, else hardware
/// concurrency, always >= 1.
int worker_threads();

/// Runs fn(begin, end) over disjoint chunks of [0, n). Falls back to a
/// single serial call for small n or when already inside a parallel region
/// (no nested thread explosions). Chunks are disjoint, so writes to
/// per-index slots need no locking; do reductions serially outside.
void parallel_for(int n, const std::function<void(int, int)>& fn);

} // namespace macflow
