#pragma once

#include <cstddef>
#include <functional>

namespace gpot {

/// Worker count: GRAPH_POTENTIAL_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Calls body(begin, end) on disjoint chunks covering [0, n). Chunks may run
/// concurrently; small ranges run inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 4096);

}  // namespace gpot
