#include "boostfuse/memtrack.hpp"

namespace boostfuse::memtrack {

namespace {
std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};
}  // namespace

void reset() {
  g_current = 0;
  g_peak = 0;
}

void add(std::size_t bytes) {
  const std::size_t now = g_current.fetch_add(bytes) + bytes;
  std::size_t prev = g_peak.load();
  while (prev < now && !g_peak.compare_exchange_weak(prev, now)) {
  }
}

void release(std::size_t bytes) { g_current.fetch_sub(bytes); }

std::size_t current() { return g_current.load(); }
std::size_t peak() { return g_peak.load(); }

}  // namespace boostfuse::memtrack
