#pragma once

#include <cstddef>
#include <functional>

namespace periodlab {

/// Worker count: `requested` if positive, else PERIODLAB_JOBS, else 1.
int resolve_jobs(int requested);

/// Runs fn(0..n-1) on up to `jobs` threads. Results must be written to
/// per-index slots by the caller. If several calls throw, the exception of
/// the lowest index is rethrown, so failures are reproducible.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace periodlab
