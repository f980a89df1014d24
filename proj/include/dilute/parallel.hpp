// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dilute {

inline std::atomic<int>& thread_count_setting() {
  static std::atomic<int> n{0};
  return n;
}

inline void set_thread_count(int n) { thread_count_setting() = std::max(0, n); }

inline int thread_count() {
  const int n = thread_count_setting();
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Chunk layout depends only on n, never on the thread count, so per-chunk
// partial results combined in chunk order are bitwise reproducible.
inline std::size_t chunk_count(std::size_t n) { return std::min<std::size_t>(n, 64); }

template <class Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
  const std::size_t chunks = chunk_count(n);
  if (chunks == 0) return;
  auto bounds = [&](std::size_t c) { return std::pair{n * c / chunks, n * (c + 1) / chunks}; };
  const int workers = std::min<int>(thread_count(), static_cast<int>(chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      fn(c, b, e);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = next++; c < chunks; c = next++) {
          auto [b, e] = bounds(c);
          fn(c, b, e);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dilute
