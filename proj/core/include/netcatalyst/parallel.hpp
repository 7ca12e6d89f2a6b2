#ifndef NETCATALYST_PARALLEL_HPP_
#define NETCATALYST_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace netcatalyst {

/// Worker count: NETCATALYST_THREADS if set and positive, otherwise the
/// machine's hardware concurrency (at least 1).
unsigned default_thread_count();

/// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks must
/// write only to their own output slot; the first exception thrown by any
/// task is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace netcatalyst

#endif  // NETCATALYST_PARALLEL_HPP_
