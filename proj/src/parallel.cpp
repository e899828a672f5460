#include "kreinphoton/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace kreinphoton {
namespace {

std::atomic<unsigned> g_threads{0};

constexpr std::size_t kMinChunk = 2048;

}  // namespace

void set_worker_threads(unsigned count) { g_threads.store(count); }

unsigned worker_threads() {
  const unsigned configured = g_threads.load();
  if (configured > 0) return configured;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, n / kMinChunk));
  const std::size_t chunk_size = (n + chunks - 1) / chunks;
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), chunks));
  if (threads <= 1) {
    for (std::size_t begin = 0; begin < n; begin += chunk_size) body(begin, std::min(n, begin + chunk_size));
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const std::size_t begin = c * chunk_size;
      if (begin >= n) return;
      try {
        body(begin, std::min(n, begin + chunk_size));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kreinphoton
