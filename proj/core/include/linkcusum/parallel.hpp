#pragma once

#include <cstddef>
#include <functional>

namespace linkcusum {

// Worker threads used by parallel_for. Reads LINKCUSUM_THREADS once (any
// positive integer); otherwise std::thread::hardware_concurrency().
std::size_t worker_count();

// Runs fn(i) for every i in [0, count), possibly on several threads.
// Each index is processed exactly once and callers must make fn(i) depend
// only on i (give every index its own rng stream, write only to slot i),
// so results are identical for any worker count. Nested calls run inline.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn);

}  // namespace linkcusum
