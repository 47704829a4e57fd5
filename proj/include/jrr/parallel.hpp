#pragma once

#include <cstddef>
#include <functional>

namespace jrr {

// worker count: requested if > 0, else JIGGLE_RR_THREADS, else hardware
int thread_count(int requested = 0);

// Runs f(i) for i in [0, n) on a static block partition. Callers write
// results into pre-sized storage indexed by i, so the output is identical
// for any thread count. The first exception thrown by any worker is
// rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f,
                  int threads = 0);

}  // namespace jrr
