#pragma once

#include <cstddef>
#include <functional>

namespace logpot {

// Worker count: hardware concurrency capped by LOGPOT_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, n). Each index must write only its own output
// slot; results are then independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace logpot
