#include "tibvp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tibvp {

namespace {

int limit_from_env() {
  if (const char* env = std::getenv("TAYLOR_IBVP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::atomic<int>& limit_storage() {
  static std::atomic<int> limit{limit_from_env()};
  return limit;
}

// Below this many points the thread start-up cost dominates.
constexpr std::size_t kMinChunk = 4096;

}  // namespace

int thread_limit() { return limit_storage().load(); }

void set_thread_limit(int threads) { limit_storage().store(std::max(1, threads)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_limit()), std::max<std::size_t>(1, n / kMinChunk));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(n, chunk));
}

}  // namespace tibvp
