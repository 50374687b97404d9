#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace tra::detail {

/// Least index in [0, total) for which `pred` holds, scanning with
/// `workers` threads. The result is independent of the worker count.
template <typename Pred>
std::optional<std::uint64_t> find_first(std::uint64_t total, unsigned workers,
                                        Pred&& pred) {
  constexpr std::uint64_t kChunk = 1024;
  constexpr std::uint64_t kNone = UINT64_MAX;
  if (workers <= 1 || total <= kChunk) {
    for (std::uint64_t i = 0; i < total; ++i) {
      if (pred(i)) return i;
    }
    return std::nullopt;
  }

  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> best{kNone};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&] {
    try {
      for (;;) {
        const std::uint64_t start = next_chunk.fetch_add(kChunk);
        if (start >= total || start > best.load()) return;
        const std::uint64_t end = std::min(total, start + kChunk);
        for (std::uint64_t i = start; i < end; ++i) {
          if (pred(i)) {
            std::uint64_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
            break;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      best.store(0);
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  if (best.load() == kNone) return std::nullopt;
  return best.load();
}

}  // namespace tra::detail
