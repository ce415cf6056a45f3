#pragma once

#include <cstddef>
#include <functional>

namespace nlhj {

/// Worker count: NONLOCAL_HJ_THREADS when set to a positive integer, else the
/// hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [0, n) over contiguous blocks. Each index is handled
/// by exactly one worker, so results written per index are deterministic.
/// Ranges shorter than `min_parallel` run inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t min_parallel = 64);

}  // namespace nlhj
