#pragma once

#include <cstddef>
#include <functional>

namespace gcdsum {

// Worker count used when an operation is not given one explicitly.
// Defaults to std::thread::hardware_concurrency().
unsigned default_workers();
void set_default_workers(unsigned workers);

// Runs body(i) for i in [0, n) on up to `workers` threads (0 = default).
// Work is dealt round-robin, so callers that write results into per-index
// slots and reduce them in index order get results independent of the
// worker count.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace gcdsum
