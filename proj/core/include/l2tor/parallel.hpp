#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace l2tor {

/// Number of workers used by engine-internal parallelism.
/// Capped by the L2TOR_THREADS environment variable when set.
int worker_count();

/// Runs fn(i) for i in [0, n). Work is split into a fixed number of chunks
/// independent of the worker count, so chunk boundaries are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Deterministic parallel reduction: term(i) values are accumulated within
/// fixed chunks and the per-chunk sums are combined pairwise in index order.
/// The result is bit-identical for any worker count.
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& term);

/// Pairwise summation of v in index order (used to keep reductions stable).
double pairwise_sum(const std::vector<double>& v);

}  // namespace l2tor
