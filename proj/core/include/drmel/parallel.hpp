#pragma once

#include <cstddef>
#include <functional>

namespace drmel {

// Worker count from DRMEL_WORKERS, else std::thread::hardware_concurrency().
unsigned default_workers();

// Runs body(i) for i in [0, count) on up to `workers` threads. Output must be
// keyed by i so results never depend on scheduling. If any body throws, the
// exception from the smallest failing index is rethrown after all workers
// finish.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace drmel
