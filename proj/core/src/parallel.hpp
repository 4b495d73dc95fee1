#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tailcop::detail {

// Runs f(0..njobs-1) over a fixed-size worker pool. Each job writes only its
// own output slot, so scheduling cannot change results. The first exception
// thrown by a job is rethrown after all workers have drained.
template <class F>
void parallel_for(int njobs, int threads, F&& f) {
  if (threads < 1) threads = 1;
  if (threads > njobs) threads = njobs;
  if (threads <= 1) {
    for (int i = 0; i < njobs; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= njobs) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace tailcop::detail
