#pragma once

#include <cstddef>
#include <functional>

namespace jumphedge {

// Worker-count cap for parallel_for; results never depend on it.
unsigned thread_budget();
void set_thread_budget(unsigned n);  // 0 restores the hardware default

// Runs body(0..n-1) on up to thread_budget() workers. Each index writes its
// own preallocated slot, so outputs are bit-identical for any worker count.
// The first exception thrown by a body is rethrown on the caller thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace jumphedge
