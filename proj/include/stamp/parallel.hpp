#pragma once

#include <cstddef>
#include <functional>

namespace stamp {

/// Worker count: STAMP_THREADS if set to a positive integer, else hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// visited by exactly one call, so per-index results never depend on the
/// number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace stamp
