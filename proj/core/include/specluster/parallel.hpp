#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace specluster {

// Number of hardware threads, never less than one.
inline std::size_t default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Runs fn(i) for i in [begin, end) over `threads` workers using static
// contiguous chunks. Callers write to disjoint outputs only, so results do not
// depend on the thread count.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, std::size_t threads, Fn&& fn) {
  if (end <= begin) return;
  const std::size_t count = end - begin;
  threads = std::clamp<std::size_t>(threads, 1, count);
  if (threads == 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (count + threads - 1) / threads;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    const std::size_t lo = begin + w * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

}  // namespace specluster
