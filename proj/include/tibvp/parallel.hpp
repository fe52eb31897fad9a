#pragma once

#include <cstddef>
#include <functional>

namespace tibvp {

/// Upper bound on worker threads used by pointwise kernels. Initialized from
/// TAYLOR_IBVP_THREADS (default 1); set_thread_limit overrides it.
int thread_limit();
void set_thread_limit(int threads);

/// Calls body(begin, end) over disjoint chunks of [0, n). Each index is
/// written by exactly one chunk, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tibvp
