#pragma once

#include <cstddef>
#include <functional>

namespace fockzero {

/// Worker count: FOCKZERO_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for every i in [0, count). Work is split into contiguous chunks that are
/// handed out in index order; results must be written per index so that the outcome does
/// not depend on `threads`. threads == 0 means thread_count().
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t threads = 0);

}  // namespace fockzero
