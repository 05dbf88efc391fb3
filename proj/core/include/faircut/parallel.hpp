#pragma once

#include <cstddef>
#include <functional>

namespace faircut {

/// Runs fn(0), ..., fn(count-1), chunked across worker threads. Callers must
/// write results into disjoint slots indexed by the argument; the assembled
/// result is then independent of the thread schedule. The first exception
/// thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned num_threads = 0);

}  // namespace faircut
