#pragma once

#include <cstddef>
#include <functional>

namespace iqsieve {

/// Worker count: IQSIEVE_THREADS when set to a positive integer, else the
/// hardware concurrency. Throws std::invalid_argument on a malformed value.
unsigned thread_count();

/// Splits [0, n) into contiguous chunks and runs body(begin, end) on each,
/// one chunk per worker. Each index is handled by exactly one call, so
/// per-index results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body, unsigned threads = 0);

}  // namespace iqsieve
