#pragma once

#include <cstddef>
#include <functional>

namespace boostfuse {

// Worker cap: BOOSTFUSE_THREADS if set, else hardware concurrency.
std::size_t thread_count();

// Runs fn(i) for i in [0, n) across at most thread_count() workers.
// Work is split by contiguous index blocks; each index is processed exactly
// once, so results written to per-index slots are independent of the worker
// count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace boostfuse
