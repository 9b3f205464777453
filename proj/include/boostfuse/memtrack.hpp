#pragma once

#include <atomic>
#include <cstddef>

// Internal accounting of the large working buffers (sorted split buffers,
// bin matrices, histograms, tree nodes). Deliberately not an OS probe, so
// the comparison table is deterministic and portable.

namespace boostfuse::memtrack {

void reset();
void add(std::size_t bytes);
void release(std::size_t bytes);
std::size_t current();
std::size_t peak();

// RAII claim on a buffer of known size.
struct Scoped {
  explicit Scoped(std::size_t bytes) : bytes_(bytes) { add(bytes_); }
  ~Scoped() { release(bytes_); }
  Scoped(const Scoped&) = delete;
  Scoped& operator=(const Scoped&) = delete;

 private:
  std::size_t bytes_;
};

}  // namespace boostfuse::memtrack
