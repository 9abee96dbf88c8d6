#pragma once

#include <cstddef>
#include <functional>

namespace bvm {

// Worker count: explicit override, else BVMASTER_THREADS, else hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Runs body(i) for i in [0, n). Exceptions are rethrown on the calling thread
// (the one with the smallest index wins, so failures are reproducible).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bvm
