#pragma once

#include <cstddef>
#include <functional>

namespace possum {

// Worker count: POSSUM_THREADS if set (>= 1), else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, count); iterations are independent.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace possum
