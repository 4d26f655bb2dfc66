#include "salpcc/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace salpcc {
namespace {

std::size_t default_threads() {
  if (const char* env = std::getenv("SALPCC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<std::size_t> g_threads{0};

}  // namespace

void set_thread_count(std::size_t threads) { g_threads.store(threads); }

std::size_t thread_count() {
  const std::size_t t = g_threads.load();
  return t == 0 ? default_threads() : t;
}

}  // namespace salpcc
