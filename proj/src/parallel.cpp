#include "idg/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace idg {

namespace {

int g_threads = -1; // -1 = uninitialised, 0 = auto

int resolve_auto() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int current_threads() {
  if (g_threads == -1) {
    int n = 0;
    if (const char* env = std::getenv("IDG_THREADS")) {
      n = std::atoi(env);
      if (n < 0) n = 0;
    }
    g_threads = n;
  }
  return g_threads == 0 ? resolve_auto() : g_threads;
}

template <typename ChunkFn>
void run_chunks(std::int64_t nchunks, const ChunkFn& chunk_fn) {
  const int nthreads = std::min<std::int64_t>(current_threads(), nchunks);
  if (nthreads <= 1) {
    for (std::int64_t c = 0; c < nchunks; ++c) chunk_fn(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= nchunks) return;
      chunk_fn(c);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

} // namespace

void set_num_threads(int n) { g_threads = n < 0 ? 0 : n; }

int num_threads() { return current_threads(); }

void parallel_for(std::int64_t n, std::int64_t grain,
                  const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  if (grain < 1) grain = 1;
  const std::int64_t nchunks = (n + grain - 1) / grain;
  run_chunks(nchunks, [&](std::int64_t c) {
    const std::int64_t b = c * grain;
    fn(b, std::min(b + grain, n));
  });
}

double parallel_sum(std::int64_t n, std::int64_t grain,
                    const std::function<double(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return 0.0;
  if (grain < 1) grain = 1;
  const std::int64_t nchunks = (n + grain - 1) / grain;
  std::vector<double> partial(nchunks, 0.0);
  run_chunks(nchunks, [&](std::int64_t c) {
    const std::int64_t b = c * grain;
    partial[c] = fn(b, std::min(b + grain, n));
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

} // namespace idg
