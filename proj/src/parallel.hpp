#pragma once

// Static contiguous partition of [0, count) over worker threads. Each index
// is processed exactly once by exactly one worker, so callers writing into
// per-index slots get results independent of the thread count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kakeya::detail {

template <class Fn>
void parallel_for(std::uint64_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::uint64_t nt = std::min<std::uint64_t>(std::uint64_t(threads), count);
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::uint64_t t = 0; t < nt; ++t) {
    std::uint64_t b = count * t / nt, e = count * (t + 1) / nt;
    pool.emplace_back([&, b, e] {
      try {
        for (std::uint64_t i = b; i < e; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace kakeya::detail
