#include "foresee/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace foresee {

int worker_count() {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (const char* env = std::getenv("FORESEE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) workers = std::min(workers, cap);
  }
  return workers;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1 || n < 32) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      // Contiguous block partition.
      const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
      const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace foresee
