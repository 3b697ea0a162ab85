#pragma once

#include <cstddef>
#include <functional>

namespace backflow::detail {

/// Worker count for a request of `requested` threads (0 means all cores).
unsigned worker_count(unsigned requested, std::size_t tasks);

/// Run body(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace backflow::detail
