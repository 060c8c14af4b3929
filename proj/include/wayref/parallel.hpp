#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace wayref {

// Runs fn(i) for i in [0, n) on up to `jobs` threads (0 = hardware
// concurrency). Results must go to per-index slots; the first exception by
// index is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace wayref
