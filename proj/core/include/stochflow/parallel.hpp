#pragma once

#include <cstddef>
#include <functional>

namespace stochflow {

// Worker count: explicit override if set, else STOCHFLOW_WORKERS, else 1.
std::size_t worker_count();
// 0 clears the override
void set_worker_count(std::size_t workers);

// Runs fn(i) for i in [0, count) on contiguous static slices, one per worker.
// Results must only depend on i, never on which worker ran it.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace stochflow
