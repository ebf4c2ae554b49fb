#pragma once

#include <cstddef>
#include <functional>

namespace paramix {

// PARAMIX_THREADS (positive integer), default 1.
unsigned worker_count();

// Splits [0, n) into contiguous chunks whose starts are multiples of `align`
// and runs body(begin, end) on each. Chunks never overlap, so results are
// independent of the worker count.
void parallel_for(std::size_t n, std::size_t align, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace paramix
