#pragma once

#include <cstdint>
#include <functional>

namespace srwe {

/// Splitmix64 step; used to derive independent per-cell seeds from one
/// configuration seed so that parallel cells stay order-independent.
std::uint64_t splitmix64(std::uint64_t x);

/// Worker cap: the SRWE_THREADS environment variable when set (>= 1),
/// otherwise the hardware concurrency.
unsigned max_worker_threads();

/// Runs fn(0..n-1) on up to max_worker_threads() workers. Callers must write
/// results into per-index slots; the index partition is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace srwe
