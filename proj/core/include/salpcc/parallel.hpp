#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace salpcc {

/// Process-wide worker count used by parallel_for. 0 restores the default
/// (SALPCC_THREADS if set, else hardware concurrency).
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Every index is
/// visited exactly once; callers must only write to per-index outputs so the
/// result does not depend on the chunking.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_chunk = 256) {
  const std::size_t workers =
      std::min(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1 || n == 0) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) continue;
      pool.emplace_back([&body, &failures, w, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    try {
      body(std::size_t{0}, std::min(n, chunk));
    } catch (...) {
      failures[0] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace salpcc
