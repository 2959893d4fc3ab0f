#include "ccdlab/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "ccdlab/errors.hpp"

namespace ccdlab {

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CCDLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for_chunks(int n_chunks, int threads, const std::function<void(int)>& fn) {
  if (n_chunks <= 0) return;
  threads = std::min(resolve_thread_count(threads), n_chunks);
  if (threads <= 1) {
    for (int i = 0; i < n_chunks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_chunks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> pairwise_tree_sum(std::vector<std::vector<double>> partials) {
  if (partials.empty()) return {};
  std::size_t count = partials.size();
  while (count > 1) {
    const std::size_t half = count / 2;
    for (std::size_t i = 0; i < half; ++i) {
      auto& a = partials[2 * i];
      const auto& b = partials[2 * i + 1];
      if (a.size() != b.size()) throw InvalidArgument("pairwise_tree_sum: ragged partials");
      for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
      if (i != 2 * i) partials[i].swap(partials[2 * i]);
    }
    if (count % 2 == 1) partials[half].swap(partials[count - 1]);
    count = half + count % 2;
  }
  return std::move(partials[0]);
}

}  // namespace ccdlab
