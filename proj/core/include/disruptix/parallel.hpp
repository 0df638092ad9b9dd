#pragma once

#include <cstdint>
#include <functional>

namespace disruptix {

// Worker count for data-parallel loops: hardware concurrency, capped by
// the DISRUPTIX_THREADS environment variable when set. Always >= 1.
int worker_count();

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
// worker. Callers must only write to disjoint per-index slots so results
// are identical for any worker count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace disruptix
