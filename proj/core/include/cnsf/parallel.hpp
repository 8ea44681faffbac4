#pragma once

#include <functional>

namespace cnsf {

/// Worker count for a request; values < 1 mean "all hardware threads".
int resolve_threads(int requested);

/**
 * Runs fn(begin, end) over [0, count) split into at most `threads`
 * contiguous chunks, one per worker. The first exception thrown by any
 * worker is rethrown after all workers finish.
 */
void parallel_for(int count, int threads, const std::function<void(int, int)> &fn);

} // namespace cnsf
