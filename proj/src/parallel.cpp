#include "agf/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace agf {

int recommended_threads() {
  if (const char* env = std::getenv("AGF_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(long count, const std::function<void(long)>& task) {
  if (count <= 0) return;
  int workers = recommended_threads();
  if (workers <= 1 || count == 1) {
    for (long i = 0; i < count; ++i) task(i);
    return;
  }
  if (workers > count) workers = static_cast<int>(count);

  std::atomic<long> next{0};
  std::exception_ptr error = nullptr;
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        task(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace agf
