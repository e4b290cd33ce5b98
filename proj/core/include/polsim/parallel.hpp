#pragma once

#include <cstddef>
#include <functional>

namespace polsim {

// Worker count: POLSIM_THREADS when set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, n) across worker_count() threads. Each index is
// processed exactly once; results must be written to per-index storage so
// output never depends on scheduling. If any call throws, the exception of
// the lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace polsim
