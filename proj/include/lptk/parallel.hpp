#pragma once

#include <cstddef>
#include <functional>

namespace lptk {

/// Worker thread budget: LPTK_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [begin, end) over contiguous blocks, one block per
/// worker. Bodies must write disjoint memory.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

} // namespace lptk
