#pragma once

#include <cstddef>
#include <functional>

namespace qtop {

/// Worker count used by parallel_for; 0 restores the default
/// (hardware concurrency).
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write to disjoint slots, so results do not depend on scheduling. The first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qtop
