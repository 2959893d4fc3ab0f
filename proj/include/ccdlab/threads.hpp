#pragma once

#include <functional>
#include <vector>

namespace ccdlab {

/// Requested thread count resolved against the CCDLAB_THREADS environment
/// variable and the hardware concurrency (requested = 0 means "auto").
int resolve_thread_count(int requested);

/// Runs fn(0..n_chunks-1) across a worker pool. Chunk-to-thread assignment is
/// dynamic, so fn must write only into per-chunk slots; any exception is
/// rethrown on the calling thread after the pool drains.
void parallel_for_chunks(int n_chunks, int threads, const std::function<void(int)>& fn);

/// Elementwise sum of equal-length partial vectors in a fixed pairwise tree
/// (index order), independent of how the partials were produced.
std::vector<double> pairwise_tree_sum(std::vector<std::vector<double>> partials);

}  // namespace ccdlab
