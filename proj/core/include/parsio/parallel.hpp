#pragma once

#include <cstddef>
#include <functional>

namespace parsio {

/// Number of worker threads used by parallel loops (default 1).
void set_thread_count(int count);
int thread_count();

/// Splits [0, n) into contiguous chunks, one per worker. Each index is
/// processed by exactly one worker, so any per-index reduction done inside
/// `body` is independent of the worker count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

/// Pairwise (cascade) summation; deterministic for a fixed input order.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace parsio
