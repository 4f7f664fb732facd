#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace multicmh {

/// Runs body(i) for i in [0, count), split across `workers` threads in
/// contiguous chunks. The body must write only to its own slot; results are
/// therefore independent of the worker count.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  unsigned w = workers;
  if (static_cast<std::size_t>(w) > count) w = static_cast<unsigned>(count);
  std::vector<std::thread> threads;
  threads.reserve(w);
  std::size_t chunk = (count + w - 1) / w;
  for (unsigned t = 0; t < w; ++t) {
    std::size_t lo = static_cast<std::size_t>(t) * chunk;
    std::size_t hi = lo + chunk < count ? lo + chunk : count;
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace multicmh
