#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace floc {

// Number of worker threads to use. `requested` == 0 means "default": the
// hardware concurrency, capped by the FLOC_THREADS environment variable.
// An explicit request is also capped by FLOC_THREADS.
unsigned resolve_threads(unsigned requested = 0);

// Runs fn(i) for i in [0, count) on up to `threads` workers using static
// contiguous chunks. If any call throws, the exception raised for the lowest
// index is rethrown after all workers finish, so failures are deterministic.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace floc
