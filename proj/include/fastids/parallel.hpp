#ifndef FASTIDS_PARALLEL_HPP
#define FASTIDS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace fastids {

/// Worker count for `requested` (0 = automatic). The FASTIDS_THREADS
/// environment variable caps the result.
unsigned resolve_threads(unsigned requested);

/// Calls fn(i) for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fastids

#endif  // FASTIDS_PARALLEL_HPP
