#pragma once

#include <cstddef>
#include <functional>

namespace spyswap {

// Worker count: hardware concurrency, capped by SPYSWAP_THREADS when set.
std::size_t worker_count();

// Runs body(i) for i in [0, count). Static chunking; callers must make body
// independent of which worker runs it.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace spyswap
