#pragma once

#include <functional>

namespace ksal {

// Effective worker count: `requested` if positive, otherwise hardware
// concurrency, in both cases capped by the KSAL_MAX_THREADS environment
// variable when it is set to a positive integer.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, count) across up to `threads` workers. Iterations
// are handed out by an atomic counter; callers get determinism by writing to
// preallocated per-index slots and reducing in index order afterwards. The
// first exception thrown by any worker is rethrown on the calling thread.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace ksal
