#pragma once

#include <cstdint>
#include <functional>

namespace idg {

/// Worker threads used by data-parallel loops. 0 = hardware concurrency.
/// Initialised from the IDG_THREADS environment variable when set.
void set_num_threads(int n);
int num_threads();

/// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries
/// depend only on n and grain, never on the thread count, so any computation
/// whose chunks write disjoint outputs is bit-identical for 1..N threads.
void parallel_for(std::int64_t n, std::int64_t grain,
                  const std::function<void(std::int64_t, std::int64_t)>& fn);

/// Chunked reduction: partial sums are produced per fixed chunk and combined
/// in chunk order, so the result is bit-identical across thread counts.
double parallel_sum(std::int64_t n, std::int64_t grain,
                    const std::function<double(std::int64_t, std::int64_t)>& fn);

/// Reasonable grain for per-voxel loops.
inline constexpr std::int64_t kVoxelGrain = 1 << 16;

} // namespace idg
