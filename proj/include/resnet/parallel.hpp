#pragma once

#include <cstddef>
#include <functional>

namespace resnet {

// Worker count used when a caller passes 0: RESNET_THREADS if set, else hardware concurrency.
unsigned default_threads();

// Runs body(i) for i in [0, n) over up to `threads` workers. Iterations are
// statically partitioned; the first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace resnet
