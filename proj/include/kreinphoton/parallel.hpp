#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kreinphoton {

/// Number of worker threads used by grid loops. Defaults to the hardware
/// concurrency; 1 forces serial execution. Results do not depend on it.
void set_worker_threads(unsigned count);
unsigned worker_threads();

/// Calls body(begin, end) over a partition of [0, n) that depends only on n.
void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise (tree) summation in a fixed order; bit-reproducible for a given
/// input sequence.
template <class T>
T pairwise_sum(std::span<const T> values) {
  if (values.empty()) return T{};
  if (values.size() <= 8) {
    T acc = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) acc += values[i];
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values));
}

}  // namespace kreinphoton
