#pragma once

#include <cstddef>
#include <functional>

namespace primexp {

/// Thread count used when a caller passes 0.
unsigned default_threads() noexcept;

/// Runs body(i) for i in [0, count) on up to `threads` worker threads.
/// Work items are independent; callers that reduce results do so afterwards
/// in index order, so output never depends on scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace primexp
