#pragma once

#include <functional>

namespace filtlab {

// Worker count: explicit argument if positive, else FILTRATION_LAB_THREADS,
// else hardware concurrency (capped).
int resolve_thread_count(int requested = 0);

// Runs body(i) for i in [0, n) across workers. Results must be written to
// per-index slots by the caller; the scheduler guarantees nothing about
// ordering, so bodies have to be independent.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace filtlab
