#pragma once

#include <cstdint>
#include <functional>

namespace cvqkd {

/// Worker count: CVQKD_THREADS when set to a positive integer, otherwise
/// the hardware concurrency. Affects speed only, never results.
int worker_count();

/// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on a pool of
/// workers. Each chunk must write only to its own output slot; callers
/// reduce the slots in fixed order afterwards, so results are identical
/// for any worker count.
void parallel_chunks(std::int64_t n_chunks,
                     const std::function<void(std::int64_t)>& fn);

} // namespace cvqkd
